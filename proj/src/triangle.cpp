#include "bordered/triangle.hpp"

namespace bordered {

namespace {

struct TorusIdx {
  DgAlgebraPresentation alg;
  std::size_t i0, i1, r1, r2, r3, r12, r23, r123;
};

TorusIdx torus_idx() {
  TorusIdx t;
  t.alg = torus_algebra();
  t.i0 = t.alg.index_of("iota0");
  t.i1 = t.alg.index_of("iota1");
  t.r1 = t.alg.index_of("rho1");
  t.r2 = t.alg.index_of("rho2");
  t.r3 = t.alg.index_of("rho3");
  t.r12 = t.alg.index_of("rho12");
  t.r23 = t.alg.index_of("rho23");
  t.r123 = t.alg.index_of("rho123");
  return t;
}

}  // namespace

FilteredTypeD SurgeryTriangleFixture::filtered() const {
  FilteredTypeD f;
  f.poset = FinitePoset({"inf", "-1", "0"},
                        {{"inf", "-1"}, {"-1", "0"}, {"inf", "0"}});
  f.parts = {h_inf, h_minus_one, h_zero};
  f.connectors[{0, 1}] = f_inf_minus_one;
  f.connectors[{1, 2}] = f_minus_one_zero;
  // F^{inf<0} = 0 is represented by the absent connector.
  return f;
}

SurgeryTriangleFixture build_fixture() {
  auto t = torus_idx();
  SurgeryTriangleFixture fx;

  fx.h_inf.algebra = t.alg;
  fx.h_inf.generators = {{"r", 1}};
  fx.h_inf.delta1 = {{{t.r23, 0}}};

  fx.h_minus_one.algebra = t.alg;
  fx.h_minus_one.generators = {{"a", 0}, {"b", 1}};
  fx.h_minus_one.delta1 = {{{t.r1, 1}, {t.r3, 1}}, {}};

  fx.h_zero.algebra = t.alg;
  fx.h_zero.generators = {{"n", 0}};
  fx.h_zero.delta1 = {{{t.r12, 0}}};

  fx.f_inf_minus_one = {{{{t.r2, 0}, {t.i1, 1}}}};
  fx.f_minus_one_zero = {{{{t.i0, 0}}, {{t.r2, 0}}}};
  fx.f_inf_zero = zero_morphism(fx.h_inf, fx.h_zero);
  fx.theta = {{{{t.r1, 0}, {t.r3, 0}}}};

  auto require = [](bool cond, const std::string& identity) {
    if (!cond) throw FixtureError("fixture identity failed: " + identity);
  };
  require(check_typeD(fx.h_inf).ok(), "delta1^2 = 0 on H_inf");
  require(check_typeD(fx.h_minus_one).ok(), "delta1^2 = 0 on H_-1");
  require(check_typeD(fx.h_zero).ok(), "delta1^2 = 0 on H_0");
  require(morphism_is_zero(morphism_differential(fx.h_inf, fx.h_minus_one,
                                                 fx.f_inf_minus_one)),
          "F^{inf<-1} is a cycle");
  require(morphism_is_zero(morphism_differential(fx.h_minus_one, fx.h_zero,
                                                 fx.f_minus_one_zero)),
          "F^{-1<0} is a cycle");
  require(morphism_is_zero(morphism_differential(fx.h_zero, fx.h_inf,
                                                 fx.theta)),
          "theta is a cycle");
  require(morphism_is_zero(compose_typeD(fx.h_inf, fx.h_minus_one, fx.h_zero,
                                         fx.f_minus_one_zero,
                                         fx.f_inf_minus_one)),
          "F^{-1<0} . F^{inf<-1} = 0");
  require(check_filtered_typeD(fx.filtered()).ok(),
          "filtered compatibility over inf < -1 < 0");
  return fx;
}

ConeIsoResult verify_cone_iso(const SurgeryTriangleFixture& fx) {
  auto t = torus_idx();
  ConeIsoResult res;
  res.cone = mapping_cone(fx.h_zero, fx.h_inf, fx.theta);
  const std::size_t n = res.cone.index_of("n");
  const std::size_t r = res.cone.index_of("r");

  // Phi(a) = n, Phi(b) = r + rho2 (x) n; its inverse sends n |-> a,
  // r |-> b + rho2 (x) a.
  res.phi = {{{{t.i0, n}}, {{t.i1, r}, {t.r2, n}}}};
  res.phi_inverse = {std::vector<DElt>(res.cone.generators.size())};
  res.phi_inverse.terms[n] = {{t.i0, 0}};
  res.phi_inverse.terms[r] = {{t.i1, 1}, {t.r2, 0}};

  auto record = [&](bool cond, const std::string& what) {
    if (!cond) res.residuals.push_back(what);
  };
  record(morphism_is_zero(
             morphism_differential(fx.h_minus_one, res.cone, res.phi)),
         "Phi does not commute with the differentials");
  record(morphism_is_zero(morphism_differential(res.cone, fx.h_minus_one,
                                                res.phi_inverse)),
         "Phi^{-1} does not commute with the differentials");
  auto right = compose_typeD(res.cone, fx.h_minus_one, res.cone, res.phi,
                             res.phi_inverse);
  record(right.terms == identity_morphism(res.cone).terms,
         "Phi . Phi^{-1} != id");
  auto left = compose_typeD(fx.h_minus_one, res.cone, fx.h_minus_one,
                            res.phi_inverse, res.phi);
  record(left.terms == identity_morphism(fx.h_minus_one).terms,
         "Phi^{-1} . Phi != id");
  // Bijective on generators: the idempotent-coefficient part of Phi is a
  // permutation matrix.
  std::set<std::size_t> hit;
  bool bij = true;
  for (const auto& col : res.phi.terms) {
    std::size_t count = 0;
    for (const auto& [a, y] : col)
      if (fx.h_minus_one.algebra.is_idempotent(a)) {
        ++count;
        if (!hit.insert(y).second) bij = false;
      }
    if (count != 1) bij = false;
  }
  record(bij && hit.size() == res.cone.generators.size(),
         "Phi is not bijective on generators");
  res.ok = res.residuals.empty();
  return res;
}

AInfModule triangle_test_module() {
  auto t = torus_idx();
  AInfModule m;
  m.algebra = t.alg;
  m.generators = {{"t0", 0}, {"t1", 1}};
  m.actions[{0, {t.r3}}] = {1};  // m2(t0, rho3) = t1
  m.bounded = true;
  m.arity_bound = 1;
  auto report = check_module(m);
  if (!report.ok())
    throw FixtureError("test module fails the module relations: " +
                       report.violations.front());
  return m;
}

ReorderedConesResult verify_reordered_cones(const SurgeryTriangleFixture& fx,
                                            const AInfModule& test_module) {
  ReorderedConesResult res;
  auto rank = [&](const TypeDStructure& p) {
    return homology_rank(box_tensor(test_module, p)).total;
  };
  res.vertex_ranks = {rank(fx.h_inf), rank(fx.h_minus_one), rank(fx.h_zero)};
  res.cone_ranks = {
      rank(mapping_cone(fx.h_zero, fx.h_inf, fx.theta)),
      rank(mapping_cone(fx.h_inf, fx.h_minus_one, fx.f_inf_minus_one)),
      rank(mapping_cone(fx.h_minus_one, fx.h_zero, fx.f_minus_one_zero)),
  };
  res.ok = res.cone_ranks[0] == res.vertex_ranks[1] &&
           res.cone_ranks[1] == res.vertex_ranks[2] &&
           res.cone_ranks[2] == res.vertex_ranks[0];
  return res;
}

}  // namespace bordered
