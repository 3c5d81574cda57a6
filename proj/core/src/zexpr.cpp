#include "levi/zexpr.hpp"

#include <algorithm>
#include <cmath>

namespace levi::zexpr {

struct Expr::Node {
  NodeKind kind = NodeKind::constant;
  Complex value{0.0, 0.0};
  int index = 0;
  int exponent = 0;
  std::vector<Expr> children;
};

Expr::Expr() : Expr(std::make_shared<const Node>()) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(Complex c) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::constant;
  n->value = c;
  return Expr(std::move(n));
}

Expr Expr::var(int index) {
  if (index < 0) throw DimensionError("variable index must be non-negative");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::var;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::conj_var(int index) {
  if (index < 0) throw DimensionError("variable index must be non-negative");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::conj_var;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::neg(Expr e) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::neg;
  n->children.push_back(std::move(e));
  return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return constant(0.0);
  if (terms.size() == 1) return terms.front();
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::sum;
  n->children = std::move(terms);
  return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return constant(1.0);
  if (factors.size() == 1) return factors.front();
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::product;
  n->children = std::move(factors);
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  if (exponent < 0 || exponent > kMaxExponent) {
    throw PreconditionError("exponent must lie in [0, " + std::to_string(kMaxExponent) + "]");
  }
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::power;
  n->exponent = exponent;
  n->children.push_back(std::move(base));
  return Expr(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }
Complex Expr::value() const { return node_->value; }
int Expr::index() const { return node_->index; }
int Expr::exponent() const { return node_->exponent; }
std::span<const Expr> Expr::children() const { return node_->children; }

bool Expr::is_constant(Complex c) const {
  return node_->kind == NodeKind::constant && node_->value == c;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
  case NodeKind::constant:
    return a.value() == b.value();
  case NodeKind::var:
  case NodeKind::conj_var:
    return a.index() == b.index();
  case NodeKind::power:
    if (a.exponent() != b.exponent()) return false;
    [[fallthrough]];
  default: {
    const auto ca = a.children();
    const auto cb = b.children();
    return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
  }
  }
}

// ---------------------------------------------------------------------------

Expr conjugate(const Expr& e) {
  switch (e.kind()) {
  case NodeKind::constant: {
    const Complex c = e.value();
    // Parsed imaginary literals are non-negative; keep them that way.
    if (c.real() == 0.0 && c.imag() > 0.0) return Expr::neg(e);
    return Expr::constant(std::conj(c));
  }
  case NodeKind::var:
    return Expr::conj_var(e.index());
  case NodeKind::conj_var:
    return Expr::var(e.index());
  case NodeKind::neg:
    return Expr::neg(conjugate(e.children()[0]));
  case NodeKind::power:
    return Expr::power(conjugate(e.children()[0]), e.exponent());
  case NodeKind::sum:
  case NodeKind::product: {
    std::vector<Expr> out;
    out.reserve(e.children().size());
    for (const auto& c : e.children()) out.push_back(conjugate(c));
    return e.kind() == NodeKind::sum ? Expr::sum(std::move(out)) : Expr::product(std::move(out));
  }
  }
  return e;
}

namespace {

Expr simplified_product(std::vector<Expr> factors) {
  std::vector<Expr> kept;
  kept.reserve(factors.size());
  for (auto& f : factors) {
    if (f.is_zero()) return Expr::constant(0.0);
    if (!f.is_constant(1.0)) kept.push_back(std::move(f));
  }
  return Expr::product(std::move(kept));
}

} // namespace

Expr derivative(const Expr& e, int index, Wirtinger direction) {
  switch (e.kind()) {
  case NodeKind::constant:
    return Expr::constant(0.0);
  case NodeKind::var:
    return Expr::constant(direction == Wirtinger::hol && e.index() == index ? 1.0 : 0.0);
  case NodeKind::conj_var:
    return Expr::constant(direction == Wirtinger::anti && e.index() == index ? 1.0 : 0.0);
  case NodeKind::neg: {
    Expr d = derivative(e.children()[0], index, direction);
    return d.is_zero() ? d : Expr::neg(std::move(d));
  }
  case NodeKind::sum: {
    std::vector<Expr> terms;
    for (const auto& c : e.children()) {
      Expr d = derivative(c, index, direction);
      if (!d.is_zero()) terms.push_back(std::move(d));
    }
    return Expr::sum(std::move(terms));
  }
  case NodeKind::product: {
    const auto factors = e.children();
    std::vector<Expr> terms;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      Expr d = derivative(factors[i], index, direction);
      if (d.is_zero()) continue;
      std::vector<Expr> parts(factors.begin(), factors.end());
      parts[i] = std::move(d);
      Expr term = simplified_product(std::move(parts));
      if (!term.is_zero()) terms.push_back(std::move(term));
    }
    return Expr::sum(std::move(terms));
  }
  case NodeKind::power: {
    const int k = e.exponent();
    const Expr& base = e.children()[0];
    if (k == 0) return Expr::constant(0.0);
    Expr d = derivative(base, index, direction);
    if (d.is_zero()) return d;
    if (k == 1) return d;
    Expr lowered = k == 2 ? base : Expr::power(base, k - 1);
    return simplified_product({Expr::constant(static_cast<double>(k)), std::move(lowered), std::move(d)});
  }
  }
  return Expr::constant(0.0);
}

Expr substitute(const Expr& e, std::span<const Expr> components) {
  std::vector<Expr> conj_components;
  conj_components.reserve(components.size());
  for (const auto& c : components) conj_components.push_back(conjugate(c));

  auto rec = [&](auto&& self, const Expr& x) -> Expr {
    switch (x.kind()) {
    case NodeKind::constant:
      return x;
    case NodeKind::var:
    case NodeKind::conj_var: {
      const auto j = static_cast<std::size_t>(x.index());
      if (j >= components.size()) throw DimensionError("substitute: variable index out of range");
      return x.kind() == NodeKind::var ? components[j] : conj_components[j];
    }
    case NodeKind::neg:
      return Expr::neg(self(self, x.children()[0]));
    case NodeKind::power:
      return Expr::power(self(self, x.children()[0]), x.exponent());
    case NodeKind::sum:
    case NodeKind::product: {
      std::vector<Expr> out;
      for (const auto& c : x.children()) out.push_back(self(self, c));
      return x.kind() == NodeKind::sum ? Expr::sum(std::move(out)) : Expr::product(std::move(out));
    }
    }
    return x;
  };
  return rec(rec, e);
}

Expr canonicalize(const Expr& e) {
  switch (e.kind()) {
  case NodeKind::constant:
  case NodeKind::var:
  case NodeKind::conj_var:
    return e;
  case NodeKind::neg: {
    Expr inner = canonicalize(e.children()[0]);
    if (inner.kind() == NodeKind::neg) return inner.children()[0];
    if (inner.kind() == NodeKind::constant) return Expr::constant(-inner.value());
    return Expr::neg(std::move(inner));
  }
  case NodeKind::power:
    return Expr::power(canonicalize(e.children()[0]), e.exponent());
  case NodeKind::sum:
  case NodeKind::product: {
    std::vector<std::pair<std::string, Expr>> keyed;
    for (const auto& c : e.children()) {
      Expr cc = canonicalize(c);
      keyed.emplace_back(to_string(cc), std::move(cc));
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Expr> out;
    for (auto& [key, c] : keyed) out.push_back(std::move(c));
    return e.kind() == NodeKind::sum ? Expr::sum(std::move(out)) : Expr::product(std::move(out));
  }
  }
  return e;
}

int max_variable_index(const Expr& e) {
  switch (e.kind()) {
  case NodeKind::constant:
    return -1;
  case NodeKind::var:
  case NodeKind::conj_var:
    return e.index();
  default: {
    int m = -1;
    for (const auto& c : e.children()) m = std::max(m, max_variable_index(c));
    return m;
  }
  }
}

namespace {

Complex int_power(Complex base, int k) {
  Complex result{1.0, 0.0};
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

Complex eval_unchecked(const Expr& e, const CVec& z) {
  switch (e.kind()) {
  case NodeKind::constant:
    return e.value();
  case NodeKind::var:
    return z[e.index()];
  case NodeKind::conj_var:
    return std::conj(z[e.index()]);
  case NodeKind::neg:
    return -eval_unchecked(e.children()[0], z);
  case NodeKind::sum: {
    Complex s{0.0, 0.0};
    for (const auto& c : e.children()) s += eval_unchecked(c, z);
    return s;
  }
  case NodeKind::product: {
    Complex p{1.0, 0.0};
    for (const auto& c : e.children()) p *= eval_unchecked(c, z);
    return p;
  }
  case NodeKind::power:
    return int_power(eval_unchecked(e.children()[0], z), e.exponent());
  }
  return {};
}

} // namespace

Complex eval(const Expr& e, const CVec& z) {
  if (max_variable_index(e) >= z.size()) {
    throw DimensionError("eval: expression uses z" + std::to_string(max_variable_index(e) + 1) +
                         " but the point has dimension " + std::to_string(z.size()));
  }
  return eval_unchecked(e, z);
}

bool is_structurally_real(const Expr& e) { return canonicalize(conjugate(e)) == canonicalize(e); }

bool is_real_valued(const Expr& e, int n) {
  if (max_variable_index(e) >= n) throw DimensionError("is_real_valued: variable index exceeds n");
  if (is_structurally_real(e)) return true;
  Rng rng = substream(0x5eed5eedULL, static_cast<std::uint64_t>(n));
  const CVec origin = CVec::Zero(std::max(n, 1));
  for (int trial = 0; trial < 64; ++trial) {
    const CVec z = random_in_ball(rng, origin, 1.0);
    const Complex v = eval_unchecked(e, z);
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

PolyMapSpec PolyMapSpec::parse(int n, const std::vector<std::string>& components) {
  if (n < 1) throw DimensionError("map dimension must be at least 1");
  if (static_cast<int>(components.size()) != n) {
    throw DimensionError("map spec: expected " + std::to_string(n) + " components, got " +
                         std::to_string(components.size()));
  }
  PolyMapSpec spec;
  spec.n = n;
  for (const auto& text : components) spec.components.push_back(zexpr::parse(text, n));
  return spec;
}

std::vector<std::string> PolyMapSpec::component_strings() const {
  std::vector<std::string> out;
  for (const auto& c : components) out.push_back(to_string(c));
  return out;
}

void PolyMapSpec::validate() const {
  if (n < 1 || static_cast<int>(components.size()) != n) {
    throw DimensionError("PolyMapSpec: component count must equal n");
  }
  for (const auto& c : components) {
    if (max_variable_index(c) >= n) throw DimensionError("PolyMapSpec: variable index exceeds n");
  }
}

ScalarSpec ScalarSpec::parse(int n, std::string_view text) {
  if (n < 1) throw DimensionError("scalar dimension must be at least 1");
  ScalarSpec spec;
  spec.n = n;
  spec.expr = zexpr::parse(text, n);
  spec.real_valued = is_real_valued(spec.expr, n);
  return spec;
}

ScalarSpec ScalarSpec::parse_real(int n, std::string_view text) {
  ScalarSpec spec = parse(n, text);
  if (!spec.real_valued) {
    throw RealnessError("expression is not real-valued: " + std::string(text));
  }
  return spec;
}

// ---------------------------------------------------------------------------

CompiledMap::CompiledMap(const PolyMapSpec& spec) : n_(spec.n), components_(spec.components) {
  spec.validate();
  const auto n = static_cast<std::size_t>(n_);
  d_hol_.resize(n);
  d_anti_.resize(n);
  mixed_.assign(n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
  holhol_ = mixed_;
  antianti_ = mixed_;
  for (std::size_t k = 0; k < n; ++k) {
    for (int a = 0; a < n_; ++a) {
      d_hol_[k].push_back(derivative(components_[k], a, Wirtinger::hol));
      d_anti_[k].push_back(derivative(components_[k], a, Wirtinger::anti));
    }
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        mixed_[k][a][b] = derivative(d_hol_[k][a], b, Wirtinger::anti);
        holhol_[k][a][b] = derivative(d_hol_[k][a], b, Wirtinger::hol);
        antianti_[k][a][b] = derivative(d_anti_[k][a], b, Wirtinger::anti);
      }
    }
  }
}

CVec CompiledMap::eval(const CVec& z) const {
  require_dim(z, n_, "CompiledMap::eval");
  CVec out(n_);
  for (int k = 0; k < n_; ++k) out[k] = eval_unchecked(components_[k], z);
  return out;
}

MapJet2 CompiledMap::jet(const CVec& z) const {
  require_dim(z, n_, "CompiledMap::jet");
  MapJet2 m;
  m.value = eval(z);
  m.jhol.resize(n_, n_);
  m.janti.resize(n_, n_);
  m.mixed.assign(n_, CMat(n_, n_));
  for (int k = 0; k < n_; ++k) {
    for (int a = 0; a < n_; ++a) {
      m.jhol(k, a) = eval_unchecked(d_hol_[k][a], z);
      m.janti(k, a) = eval_unchecked(d_anti_[k][a], z);
      for (int b = 0; b < n_; ++b) m.mixed[k](a, b) = eval_unchecked(mixed_[k][a][b], z);
    }
  }
  return m;
}

FullMapJet2 CompiledMap::full_jet(const CVec& z) const {
  FullMapJet2 out;
  out.jet = jet(z);
  out.holhol.assign(n_, CMat(n_, n_));
  out.antianti.assign(n_, CMat(n_, n_));
  for (int k = 0; k < n_; ++k) {
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        out.holhol[k](a, b) = eval_unchecked(holhol_[k][a][b], z);
        out.antianti[k](a, b) = eval_unchecked(antianti_[k][a][b], z);
      }
    }
  }
  return out;
}

CompiledScalar::CompiledScalar(const ScalarSpec& spec) : n_(spec.n), expr_(spec.expr) {
  if (!spec.real_valued) throw RealnessError("scalar jets require a real-valued expression");
  if (max_variable_index(expr_) >= n_) throw DimensionError("ScalarSpec: variable index exceeds n");
  const auto n = static_cast<std::size_t>(n_);
  hzz_.assign(n, std::vector<Expr>(n));
  hzzbar_.assign(n, std::vector<Expr>(n));
  for (int i = 0; i < n_; ++i) dz_.push_back(derivative(expr_, i, Wirtinger::hol));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      hzz_[i][j] = derivative(dz_[i], j, Wirtinger::hol);
      hzzbar_[i][j] = derivative(dz_[i], j, Wirtinger::anti);
    }
  }
}

double CompiledScalar::value(const CVec& z) const {
  require_dim(z, n_, "CompiledScalar::value");
  return eval_unchecked(expr_, z).real();
}

ScalarJet2 CompiledScalar::jet(const CVec& z) const {
  require_dim(z, n_, "CompiledScalar::jet");
  ScalarJet2 j;
  j.value = eval_unchecked(expr_, z).real();
  j.dz.resize(n_);
  j.hzz.resize(n_, n_);
  j.hzzbar.resize(n_, n_);
  for (int i = 0; i < n_; ++i) j.dz[i] = eval_unchecked(dz_[i], z);
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      j.hzz(i, k) = eval_unchecked(hzz_[i][k], z);
      j.hzzbar(i, k) = eval_unchecked(hzzbar_[i][k], z);
    }
  }
  // Equal mathematically; differ only by evaluation order.
  const CMat hzz = j.hzz;
  const CMat hzzbar = j.hzzbar;
  j.hzz = 0.5 * (hzz + hzz.transpose());
  j.hzzbar = 0.5 * (hzzbar + hzzbar.adjoint());
  return j;
}

MapJet2 analytic_map_jet(const PolyMapSpec& spec, const CVec& z) { return CompiledMap(spec).jet(z); }

ScalarJet2 analytic_scalar_jet(const ScalarSpec& spec, const CVec& z) {
  return CompiledScalar(spec).jet(z);
}

} // namespace levi::zexpr
