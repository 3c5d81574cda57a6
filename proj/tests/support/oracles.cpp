#include "oracles.hpp"

#include <charconv>
#include <cmath>

namespace levi::oracle {

namespace {

std::string number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

Complex power(Complex base, int e) {
  Complex r(1.0, 0.0);
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

Poly add(Poly a, const Poly& b) {
  a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
  return a;
}

Poly scale(Poly p, Complex s) {
  for (auto& t : p.terms) t.c *= s;
  return p;
}

Poly dx(const Poly& p, int j) { return add(d_z(p, j), d_zbar(p, j)); }
Poly dy(const Poly& p, int j) { return scale(add(d_z(p, j), scale(d_zbar(p, j), -1.0)), {0.0, 1.0}); }

} // namespace

Poly random_poly(Rng& rng, int n, const PolyOptions& options) {
  Poly p{n, {}};
  std::uniform_int_distribution<int> count(1, options.max_terms);
  std::uniform_int_distribution<int> var(0, n - 1);
  std::uniform_int_distribution<int> degree(1, options.max_degree);
  const int terms = count(rng);
  for (int t = 0; t < terms; ++t) {
    Monomial m{{random_uniform(rng, -1.0, 1.0) * options.coeff_scale,
                random_uniform(rng, -1.0, 1.0) * options.coeff_scale},
               std::vector<int>(static_cast<std::size_t>(n), 0),
               std::vector<int>(static_cast<std::size_t>(n), 0)};
    const int d = degree(rng);
    std::bernoulli_distribution conj_factor(0.5);
    for (int k = 0; k < d; ++k) {
      auto& slot = conj_factor(rng) ? m.beta : m.alpha;
      ++slot[static_cast<std::size_t>(var(rng))];
    }
    p.terms.push_back(std::move(m));
  }
  return p;
}

Poly real_part_poly(const Poly& p) {
  Poly r = p;
  for (const auto& t : p.terms) r.terms.push_back({std::conj(t.c), t.beta, t.alpha});
  return r;
}

Poly plus_variable(Poly p, int k) {
  Monomial m{{1.0, 0.0},
             std::vector<int>(static_cast<std::size_t>(p.n), 0),
             std::vector<int>(static_cast<std::size_t>(p.n), 0)};
  m.alpha[static_cast<std::size_t>(k)] = 1;
  p.terms.push_back(std::move(m));
  return p;
}

std::string to_dsl(const Poly& p) {
  if (p.terms.empty()) return "0";
  std::string s;
  for (std::size_t t = 0; t < p.terms.size(); ++t) {
    const Monomial& m = p.terms[t];
    if (t > 0) s += " + ";
    const double im = m.c.imag();
    s += "(" + number(m.c.real()) + (im < 0 ? " - " : " + ") + number(std::abs(im)) + "i)";
    for (int j = 0; j < p.n; ++j) {
      const auto a = m.alpha[static_cast<std::size_t>(j)];
      const auto b = m.beta[static_cast<std::size_t>(j)];
      const std::string v = "z" + std::to_string(j + 1);
      if (a > 0) s += "*" + v + (a > 1 ? "^" + std::to_string(a) : "");
      if (b > 0) s += "*conj(" + v + ")" + (b > 1 ? "^" + std::to_string(b) : "");
    }
  }
  return s;
}

Complex eval(const Poly& p, const CVec& z) {
  Complex sum(0.0, 0.0);
  for (const auto& m : p.terms) {
    Complex term = m.c;
    for (int j = 0; j < p.n; ++j) {
      term *= power(z[j], m.alpha[static_cast<std::size_t>(j)]) *
              power(std::conj(z[j]), m.beta[static_cast<std::size_t>(j)]);
    }
    sum += term;
  }
  return sum;
}

Poly d_z(const Poly& p, int j) {
  Poly r{p.n, {}};
  for (auto m : p.terms) {
    int& e = m.alpha[static_cast<std::size_t>(j)];
    if (e == 0) continue;
    m.c *= static_cast<double>(e);
    --e;
    r.terms.push_back(std::move(m));
  }
  return r;
}

Poly d_zbar(const Poly& p, int j) {
  Poly r{p.n, {}};
  for (auto m : p.terms) {
    int& e = m.beta[static_cast<std::size_t>(j)];
    if (e == 0) continue;
    m.c *= static_cast<double>(e);
    --e;
    r.terms.push_back(std::move(m));
  }
  return r;
}

RealJet2 real_jet(const Poly& p, const CVec& z) {
  const int n = p.n;
  RealJet2 jet;
  jet.value = eval(p, z).real();
  jet.gradient = RVec(2 * n);
  jet.hessian = RMat(2 * n, 2 * n);
  std::vector<Poly> first;
  for (int j = 0; j < n; ++j) first.push_back(dx(p, j));
  for (int j = 0; j < n; ++j) first.push_back(dy(p, j));
  for (int a = 0; a < 2 * n; ++a) {
    const Poly& fa = first[static_cast<std::size_t>(a)];
    jet.gradient[a] = eval(fa, z).real();
    for (int b = 0; b < 2 * n; ++b) {
      const Poly second = b < n ? dx(fa, b) : dy(fa, b - n);
      jet.hessian(a, b) = eval(second, z).real();
    }
  }
  return jet;
}

MapJet2 map_jet(const std::vector<Poly>& components, const CVec& z) {
  const auto n = static_cast<Index>(components.size());
  MapJet2 jet;
  jet.value = CVec(n);
  jet.jhol = CMat(n, n);
  jet.janti = CMat(n, n);
  for (Index k = 0; k < n; ++k) {
    const Poly& p = components[static_cast<std::size_t>(k)];
    jet.value[k] = eval(p, z);
    CMat mixed(n, n);
    for (Index a = 0; a < n; ++a) {
      jet.jhol(k, a) = eval(d_z(p, static_cast<int>(a)), z);
      jet.janti(k, a) = eval(d_zbar(p, static_cast<int>(a)), z);
      for (Index b = 0; b < n; ++b) {
        mixed(a, b) = eval(d_zbar(d_z(p, static_cast<int>(a)), static_cast<int>(b)), z);
      }
    }
    jet.mixed.push_back(mixed);
  }
  return jet;
}

RMat fd_hessian(const std::function<double(const CVec&)>& f, const CVec& z, double h) {
  const Index n = z.size();
  auto shifted = [&](Index a, double s) {
    CVec w = z;
    if (a < n) {
      w[a] += s;
    } else {
      w[a - n] += Complex(0.0, s);
    }
    return w;
  };
  RMat hess(2 * n, 2 * n);
  const double f0 = f(z);
  for (Index a = 0; a < 2 * n; ++a) {
    hess(a, a) = (f(shifted(a, h)) - 2.0 * f0 + f(shifted(a, -h))) / (h * h);
    for (Index b = a + 1; b < 2 * n; ++b) {
      auto at = [&](double sa, double sb) {
        CVec w = shifted(a, sa);
        if (b < n) {
          w[b] += sb;
        } else {
          w[b - n] += Complex(0.0, sb);
        }
        return f(w);
      };
      hess(a, b) = hess(b, a) = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
    }
  }
  return hess;
}

CVec fd_laplacian(const std::function<CVec(const CVec&)>& f, const CVec& z, double h) {
  const Index n = z.size();
  const CVec f0 = f(z);
  CVec lap = CVec::Zero(f0.size());
  for (Index a = 0; a < n; ++a) {
    for (const Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
      CVec plus = z, minus = z;
      plus[a] += h * dir;
      minus[a] -= h * dir;
      lap += (f(plus) - 2.0 * f0 + f(minus)) / (h * h);
    }
  }
  return lap;
}

std::pair<double, double> hermitian2_eigs(const CMat& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double mean = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
  return {mean - r, mean + r};
}

CVec random_point(Rng& rng, int n, double radius) {
  return random_in_ball(rng, CVec::Zero(n), radius);
}

} // namespace levi::oracle
