#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "mixchain/closed_forms.hpp"
#include "mixchain/error.hpp"
#include "mixchain/tolerances.hpp"

namespace mixchain::closed_forms {

double poly_geometric_tail(double r, std::size_t k0, double c0, double c1, double c2) {
  if (!(r >= 0.0 && r < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "geometric ratio must lie in [0, 1)");
  }
  const double t0 = 1.0 / (1.0 - r);
  const double t1 = r / ((1.0 - r) * (1.0 - r));
  const double t2 = r * (1.0 + r) / ((1.0 - r) * (1.0 - r) * (1.0 - r));
  const double k = double(k0);
  const double body = c0 * t0 + c1 * (k * t0 + t1) + c2 * (k * k * t0 + 2.0 * k * t1 + t2);
  return std::pow(r, k) * body;
}

namespace {

using Term = std::function<double(std::size_t)>;

// Golden table: explicit terms below `start`, a general term from `start`
// on, and the analytic remainder sum_{n >= K} term(n) for K >= start.
struct GoldenSpec {
  std::size_t offset;
  std::vector<double> head;
  Term term;
  Term tail_from;
};

DistributionTable build(const GoldenSpec& g, std::size_t n_max) {
  DistributionTable t;
  t.support_offset = g.offset;
  t.probs.assign(n_max + 1, 0.0);
  const std::size_t start = g.head.size();
  for (std::size_t n = 0; n <= n_max; ++n) t.probs[n] = n < start ? g.head[n] : g.term(n);
  double tail = 0.0;
  for (std::size_t n = n_max + 1; n < start; ++n) tail += g.head[n];
  t.tail_mass = tail + g.tail_from(std::max(n_max + 1, start));
  return t;
}

Term zero() {
  return [](std::size_t) { return 0.0; };
}

std::size_t ceil_half(std::size_t k) { return (k + 1) / 2; }

// sum over n >= K with n = 2k + parity, k >= k_min, of alpha r^(k - shift).
double parity_tail(std::size_t K, std::size_t parity, std::size_t k_min, std::size_t shift,
                   double alpha, double r) {
  const std::size_t from_k = K > parity ? ceil_half(K - parity) : 0;
  const std::size_t k0 = std::max(k_min, from_k);
  return poly_geometric_tail(r, k0 - shift, alpha);
}

// (x^k - y^k) / (x - y), or k x^(k-1) when the two rates coincide.
double divided_power(double x, double y, std::size_t k) {
  if (k == 0) return 0.0;
  if (std::abs(x - y) <= kDeltaTol) {
    const double m = (x + y) / 2.0;
    return double(k) * std::pow(m, double(k - 1));
  }
  return (std::pow(x, double(k)) - std::pow(y, double(k))) / (x - y);
}

// sum_{k >= k0} divided_power(x, y, k).
double divided_power_tail(double x, double y, std::size_t k0) {
  if (std::abs(x - y) <= kDeltaTol) {
    const double m = (x + y) / 2.0;
    return k0 == 0 ? poly_geometric_tail(m, 0, 1.0, 1.0)
                   : poly_geometric_tail(m, k0 - 1, 1.0, 1.0);
  }
  return (poly_geometric_tail(x, k0, 1.0) - poly_geometric_tail(y, k0, 1.0)) / (x - y);
}

[[noreturn]] void bad_params(std::string_view name, const std::string& why) {
  throw Error(ErrorCode::InvalidCaseParams, std::string(name) + ": " + why);
}

void expect_count(std::string_view name, std::span<const double> params,
                  std::initializer_list<std::size_t> counts) {
  for (std::size_t c : counts) {
    if (params.size() == c) return;
  }
  bad_params(name, "unexpected number of parameters (" + std::to_string(params.size()) + ")");
}

void expect_open_unit(std::string_view name, const char* what, double v) {
  if (!(v > 0.0 && v < 1.0)) bad_params(name, std::string(what) + " must lie in (0, 1)");
}

void expect_unit(std::string_view name, const char* what, double v) {
  if (!(v >= 0.0 && v <= 1.0)) bad_params(name, std::string(what) + " must lie in [0, 1]");
}

void expect_sum_one(std::string_view name, const char* what, double x, double y) {
  if (std::abs(x + y - 1.0) > kRowTol) bad_params(name, std::string(what) + " must sum to 1");
}

ThreeStateChain make_chain(std::string_view name, const ThreeStateChain::Entries& e) {
  try {
    return ThreeStateChain(e);
  } catch (const Error& err) {
    bad_params(name, err.what());
  }
}

CaseFixture case1(std::span<const double> params, std::size_t n_max) {
  expect_count("case1", params, {0});
  const double third = 1.0 / 3.0;
  GoldenSpec hit{0, {third, third, third}, zero(), zero()};
  GoldenSpec pass{1, {0.0, third, third, third}, zero(), zero()};
  return {"case1", {}, make_chain("case1", {{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}}), build(hit, n_max),
          build(pass, n_max)};
}

CaseFixture case2(std::span<const double> params, std::size_t n_max) {
  expect_count("case2", params, {1});
  const double p = params[0];
  expect_open_unit("case2", "p", p);
  const double q = 1.0 - p;
  // n = 2k + 2 for even n >= 2; odd n >= 3 carry no mass.
  GoldenSpec hit{0,
                 {q / 2.0, 0.5},
                 [=](std::size_t n) {
                   return n % 2 == 0 ? p * p * std::pow(q, double((n - 2) / 2)) / 2.0 : 0.0;
                 },
                 [=](std::size_t K) { return parity_tail(K, 0, 1, 1, p * p / 2.0, q); }};
  GoldenSpec pass{1,
                  {0.0, 0.5},
                  [=](std::size_t n) {
                    if (n % 2 != 0) return 0.0;
                    const double k = double((n - 2) / 2);
                    return (q * q * std::pow(p, k) + p * p * std::pow(q, k)) / 2.0;
                  },
                  [=](std::size_t K) {
                    return parity_tail(K, 0, 1, 1, q * q / 2.0, p) +
                           parity_tail(K, 0, 1, 1, p * p / 2.0, q);
                  }};
  return {"case2", {p}, make_chain("case2", {{{0, 1, 0}, {q, 0, p}, {0, 1, 0}}}),
          build(hit, n_max), build(pass, n_max)};
}

CaseFixture case3(std::span<const double> params, std::size_t n_max) {
  expect_count("case3", params, {1, 6});
  if (params.size() == 1) {
    const double eps = params[0];
    expect_open_unit("case3", "eps", eps);
    const double r = eps * (1.0 - eps);
    const double s2 = (1.0 - eps) * (1.0 - eps) + eps * eps;
    const double third = 1.0 / 3.0;
    GoldenSpec hit{0,
                   {third},
                   [=](std::size_t n) {
                     return n % 2 == 0 ? s2 * std::pow(r, double(n / 2 - 1)) / 3.0
                                       : std::pow(r, double((n - 1) / 2)) / 3.0;
                   },
                   [=](std::size_t K) {
                     return parity_tail(K, 0, 1, 1, s2 / 3.0, r) + parity_tail(K, 1, 0, 0, third, r);
                   }};
    GoldenSpec pass{1,
                    {0.0, third},
                    [=](std::size_t n) {
                      return n % 2 == 0 ? std::pow(r, double(n / 2 - 1)) / 3.0
                                        : s2 * std::pow(r, double((n - 1) / 2 - 1)) / 3.0;
                    },
                    [=](std::size_t K) {
                      return parity_tail(K, 0, 1, 1, third, r) + parity_tail(K, 1, 1, 1, s2 / 3.0, r);
                    }};
    const double e = eps, o = 1.0 - eps;
    return {"case3", {eps}, make_chain("case3", {{{0, e, o}, {o, 0, e}, {e, o, 0}}}),
            build(hit, n_max), build(pass, n_max)};
  }

  const double b = params[0], c = params[1], d = params[2], f = params[3], g = params[4],
               h = params[5];
  for (double v : params) expect_unit("case3", "entries", v);
  expect_sum_one("case3", "b and c", b, c);
  expect_sum_one("case3", "d and f", d, f);
  expect_sum_one("case3", "g and h", g, h);
  expect_open_unit("case3", "b", b);
  expect_open_unit("case3", "f", f);
  expect_open_unit("case3", "g", g);
  const double fh = f * h, cg = c * g, bd = b * d;
  const double D = 3.0 - fh - cg - bd;
  const double k2 = bd + cg;
  const double k3 = 1.0 - fh - bd - cg;
  GoldenSpec hit{0,
                 {(1.0 - fh) / D},
                 [=](std::size_t n) {
                   if (n % 2 == 0) {
                     const double k = double(n / 2 - 1);
                     return (c * h * (1.0 - cg) * std::pow(cg, k) +
                             b * f * (1.0 - bd) * std::pow(bd, k)) / D;
                   }
                   const double k = double((n - 1) / 2);
                   return (b * (1.0 - cg) * std::pow(cg, k) + c * (1.0 - bd) * std::pow(bd, k)) / D;
                 },
                 [=](std::size_t K) {
                   return parity_tail(K, 0, 1, 1, c * h * (1.0 - cg) / D, cg) +
                          parity_tail(K, 0, 1, 1, b * f * (1.0 - bd) / D, bd) +
                          parity_tail(K, 1, 0, 0, b * (1.0 - cg) / D, cg) +
                          parity_tail(K, 1, 0, 0, c * (1.0 - bd) / D, bd);
                 }};
  GoldenSpec pass{1,
                  {0.0, (1.0 - b * c * (d + g)) / D},
                  [=](std::size_t n) {
                    if (n % 2 == 0) {
                      const double k = double(n / 2 - 1);
                      return (k2 * (1.0 - fh) * std::pow(fh, k) +
                              c * h * (1.0 - cg) * std::pow(cg, k) +
                              b * f * (1.0 - bd) * std::pow(bd, k)) / D;
                    }
                    const double k = double((n - 1) / 2);
                    return (k3 * (1.0 - fh) * std::pow(fh, k - 1.0) +
                            b * (1.0 - cg) * std::pow(cg, k) + c * (1.0 - bd) * std::pow(bd, k)) / D;
                  },
                  [=](std::size_t K) {
                    return parity_tail(K, 0, 1, 1, k2 * (1.0 - fh) / D, fh) +
                           parity_tail(K, 0, 1, 1, c * h * (1.0 - cg) / D, cg) +
                           parity_tail(K, 0, 1, 1, b * f * (1.0 - bd) / D, bd) +
                           parity_tail(K, 1, 1, 1, k3 * (1.0 - fh) / D, fh) +
                           parity_tail(K, 1, 1, 0, b * (1.0 - cg) / D, cg) +
                           parity_tail(K, 1, 1, 0, c * (1.0 - bd) / D, bd);
                  }};
  return {"case3", {b, c, d, f, g, h}, make_chain("case3", {{{0, b, c}, {d, 0, f}, {g, h, 0}}}),
          build(hit, n_max), build(pass, n_max)};
}

CaseFixture case4(std::span<const double> params, std::size_t n_max) {
  expect_count("case4", params, {3});
  const double a1 = params[0], a2 = params[1], a3 = params[2];
  expect_open_unit("case4", "a1", a1);
  expect_open_unit("case4", "a2", a2);
  expect_open_unit("case4", "a3", a3);
  if (std::abs(a1 + a2 + a3 - 1.0) > kRowTol) bad_params("case4", "a1 + a2 + a3 must equal 1");
  auto geo = [](double a, std::size_t n) { return a * a * std::pow(1.0 - a, double(n - 1)); };
  auto geo_tail = [](double a, std::size_t K) { return poly_geometric_tail(1.0 - a, K - 1, a * a); };
  GoldenSpec hit{0, {a1}, [=](std::size_t n) { return geo(a2, n) + geo(a3, n); },
                 [=](std::size_t K) { return geo_tail(a2, K) + geo_tail(a3, K); }};
  GoldenSpec pass{1, {0.0}, [=](std::size_t n) { return geo(a1, n) + geo(a2, n) + geo(a3, n); },
                  [=](std::size_t K) { return geo_tail(a1, K) + geo_tail(a2, K) + geo_tail(a3, K); }};
  return {"case4", {a1, a2, a3},
          make_chain("case4", {{{a1, a2, a3}, {a1, a2, a3}, {a1, a2, a3}}}), build(hit, n_max),
          build(pass, n_max)};
}

CaseFixture case5(std::span<const double> params, std::size_t n_max) {
  expect_count("case5", params, {1, 6});
  if (params.size() == 1) {
    const double eps = params[0];
    expect_open_unit("case5", "eps", eps);
    const double o = 1.0 - eps;
    const double third = 1.0 / 3.0;
    GoldenSpec hit{0,
                   {third, eps / 3.0, eps / 3.0, eps * (1.0 - eps * eps) / 3.0},
                   [=](std::size_t n) {
                     const double k = double(n - 2);
                     return eps * std::pow(o, k) * (1.0 + k * eps) / 3.0;
                   },
                   [=](std::size_t K) {
                     return poly_geometric_tail(o, K - 2, eps / 3.0, eps * eps / 3.0);
                   }};
    GoldenSpec pass{1,
                    {0.0, third, eps / 3.0, eps / 3.0},
                    [=](std::size_t n) {
                      const double k = double(n - 3);
                      return eps * std::pow(o, k) * (1.0 + k * eps) / 3.0;
                    },
                    [=](std::size_t K) {
                      return poly_geometric_tail(o, K - 3, eps / 3.0, eps * eps / 3.0);
                    }};
    return {"case5", {eps}, make_chain("case5", {{{o, eps, 0}, {0, o, eps}, {eps, 0, o}}}),
            build(hit, n_max), build(pass, n_max)};
  }

  const double a = params[0], b = params[1], c = params[2], d = params[3], f = params[4],
               g = params[5];
  for (double v : params) expect_unit("case5", "entries", v);
  expect_sum_one("case5", "a and b", a, b);
  expect_sum_one("case5", "c and d", c, d);
  expect_sum_one("case5", "f and g", f, g);
  expect_open_unit("case5", "a", a);
  expect_open_unit("case5", "c", c);
  expect_open_unit("case5", "g", g);
  const double S = d * f + f * b + b * d;
  GoldenSpec hit{0,
                 {d * f / S, f * b * b / S, b * b * (a * f + d * d) / S},
                 [=](std::size_t n) {
                   return (f * b * b * std::pow(a, double(n - 1)) +
                           b * b * d * d * divided_power(a, c, n - 1)) / S;
                 },
                 [=](std::size_t K) {
                   return (poly_geometric_tail(a, K - 1, f * b * b) +
                           b * b * d * d * divided_power_tail(a, c, K - 1)) / S;
                 }};
  GoldenSpec pass{1,
                  {0.0, (a * d * f + b * b * f) / S, (a * b * b * f + b * b * d * d) / S},
                  [=](std::size_t n) {
                    return (b * d * d * f * f * divided_power(c, g, n - 2) +
                            f * b * b * std::pow(a, double(n - 1)) +
                            b * b * d * d * divided_power(a, c, n - 1)) / S;
                  },
                  [=](std::size_t K) {
                    return (b * d * d * f * f * divided_power_tail(c, g, K - 2) +
                            poly_geometric_tail(a, K - 1, f * b * b) +
                            b * b * d * d * divided_power_tail(a, c, K - 1)) / S;
                  }};
  return {"case5", {a, b, c, d, f, g}, make_chain("case5", {{{a, b, 0}, {0, c, d}, {f, 0, g}}}),
          build(hit, n_max), build(pass, n_max)};
}

}  // namespace

CaseFixture paper_case(std::string_view name, std::span<const double> params, std::size_t n_max) {
  if (name == "case1") return case1(params, n_max);
  if (name == "case2") return case2(params, n_max);
  if (name == "case3") return case3(params, n_max);
  if (name == "case4") return case4(params, n_max);
  if (name == "case5") return case5(params, n_max);
  throw Error(ErrorCode::InvalidCaseParams, "unknown case '" + std::string(name) + "'");
}

}  // namespace mixchain::closed_forms
