#include "laakso/core.hpp"

#include <algorithm>
#include <cctype>

namespace laakso {

namespace {

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// floor(t * 3^n) for t >= 0.
Integer scaled_floor(const Rational& t, unsigned n) {
  Integer num = t.get_num() * pow3(n);
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), t.get_den().get_mpz_t());
  return q;
}

Integer scaled_ceil(const Rational& t, unsigned n) {
  Integer num = t.get_num() * pow3(n);
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), t.get_den().get_mpz_t());
  return q;
}

bool divisible_by_3(const Integer& k) { return mpz_divisible_ui_p(k.get_mpz_t(), 3) != 0; }

void require_unit(const Rational& t, const char* what) {
  if (t < 0 || t > 1) throw std::invalid_argument(std::string(what) + " must lie in [0,1], got " + to_string(t));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!is_digits(num) || !is_digits(den)) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  Integer n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational r(negative ? Integer(-n) : n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  Rational r(value);
  r.canonicalize();
  return r.get_str();
}

Integer pow3(unsigned n) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 3, n);
  return r;
}

Rational inv_pow3(unsigned n) { return Rational(Integer(1), pow3(n)); }

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

Rational ratio(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------- ExtRational

const Rational& ExtRational::value() const {
  if (!value_) throw std::domain_error("value() on infinite ExtRational");
  return *value_;
}

std::string ExtRational::to_string() const { return value_ ? laakso::to_string(*value_) : std::string("inf"); }

bool operator==(const ExtRational& a, const ExtRational& b) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
  return *a.value_ == *b.value_;
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  if (a.is_infinite()) return b.is_infinite() ? std::strong_ordering::equal : std::strong_ordering::greater;
  if (b.is_infinite()) return std::strong_ordering::less;
  int c = cmp(*a.value_, *b.value_);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

ExtRational min(const ExtRational& a, const ExtRational& b) { return b < a ? b : a; }

// -------------------------------------------------------------- CantorAddress

CantorAddress::CantorAddress(std::string_view bits) {
  bits_.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("address bits must be 0/1, got '" + std::string(bits) + "'");
    bits_.push_back(c == '1');
  }
}

bool CantorAddress::bit(std::size_t level) const {
  if (level == 0) throw std::invalid_argument("address levels are 1-based");
  return level <= bits_.size() && bits_[level - 1];
}

CantorAddress CantorAddress::with_bit(std::size_t level, bool value) const {
  if (level == 0) throw std::invalid_argument("address levels are 1-based");
  CantorAddress r = *this;
  if (r.bits_.size() < level) r.bits_.resize(level, false);
  r.bits_[level - 1] = value;
  return r;
}

CantorAddress CantorAddress::flipped(std::size_t level) const { return with_bit(level, !bit(level)); }

CantorAddress CantorAddress::padded(std::size_t depth) const {
  CantorAddress r = *this;
  if (r.bits_.size() < depth) r.bits_.resize(depth, false);
  return r;
}

std::size_t CantorAddress::significant_depth() const {
  for (std::size_t i = bits_.size(); i > 0; --i)
    if (bits_[i - 1]) return i;
  return 0;
}

std::string CantorAddress::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

Rational CantorAddress::coordinate() const {
  Rational x(0);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) x += Rational(Integer(2), pow3(static_cast<unsigned>(i + 1)));
  x.canonicalize();
  return x;
}

bool operator==(const CantorAddress& a, const CantorAddress& b) { return (a <=> b) == std::strong_ordering::equal; }

std::strong_ordering operator<=>(const CantorAddress& a, const CantorAddress& b) {
  std::size_t n = std::max(a.depth(), b.depth());
  for (std::size_t i = 1; i <= n; ++i) {
    bool x = a.bit(i), y = b.bit(i);
    if (x != y) return x ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return std::strong_ordering::equal;
}

std::string_view to_string(Direction direction) { return direction == Direction::up ? "up" : "down"; }

HeightInterval HeightInterval::make(Rational a, Rational b) {
  a.canonicalize();
  b.canonicalize();
  if (a > b) throw std::invalid_argument("invalid height interval [" + to_string(a) + "," + to_string(b) + "]: a > b");
  require_unit(a, "interval endpoint");
  require_unit(b, "interval endpoint");
  return {std::move(a), std::move(b)};
}

LaaksoPoint LaaksoPoint::make(Rational height, CantorAddress address) {
  height.canonicalize();
  require_unit(height, "height");
  return {std::move(height), std::move(address)};
}

bool operator==(const LaaksoPoint& a, const LaaksoPoint& b) { return a.height == b.height && a.address == b.address; }

std::strong_ordering operator<=>(const LaaksoPoint& a, const LaaksoPoint& b) {
  int c = cmp(a.height, b.height);
  if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return a.address <=> b.address;
}

// ------------------------------------------------------------------- wormholes

std::vector<Rational> enumerate_wormhole_heights(unsigned n, const HeightInterval& window) {
  if (n == 0) throw std::invalid_argument("wormhole order must be positive");
  if (window.a > window.b) throw std::invalid_argument("invalid window: a > b");
  const Integer q = pow3(n);
  Integer lo = scaled_ceil(window.a, n), hi = scaled_floor(window.b, n);
  if (lo < 1) lo = 1;
  if (hi > q - 1) hi = q - 1;
  std::vector<Rational> out;
  for (Integer k = lo; k <= hi; ++k) {
    if (divisible_by_3(k)) continue;
    Rational r(k, q);
    r.canonicalize();
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<unsigned> wormhole_order(const Rational& h) {
  if (h <= 0 || h >= 1) return std::nullopt;
  Integer d = h.get_den();
  unsigned n = 0;
  while (divisible_by_3(d)) {
    d /= 3;
    ++n;
  }
  if (d != 1) return std::nullopt;
  return n;  // reduced numerator is coprime to 3
}

ExtRational gap_above(const Rational& t, unsigned n) {
  if (n == 0) throw std::invalid_argument("wormhole order must be positive");
  require_unit(t, "height");
  Integer k = scaled_floor(t, n) + 1;
  if (divisible_by_3(k)) k += 1;
  const Integer q = pow3(n);
  if (k >= q) return ExtRational::infinity();
  return ExtRational(Rational(k, q) - t);
}

ExtRational gap_below(const Rational& t, unsigned n) {
  if (n == 0) throw std::invalid_argument("wormhole order must be positive");
  require_unit(t, "height");
  Integer k = scaled_ceil(t, n) - 1;
  if (divisible_by_3(k)) k -= 1;
  if (k <= 0) return ExtRational::infinity();
  return ExtRational(t - Rational(k, pow3(n)));
}

ExtRational nearest_wormhole_gap(const Rational& t, unsigned n, Direction direction) {
  if (t <= 0 || t >= 1) throw std::invalid_argument("nearest_wormhole_gap requires t in (0,1), got " + to_string(t));
  return direction == Direction::up ? gap_above(t, n) : gap_below(t, n);
}

LaaksoPoint canonicalize(const LaaksoPoint& p) {
  auto order = wormhole_order(p.height);
  if (!order || *order > p.address.depth() || !p.address.bit(*order)) return p;
  return {p.height, p.address.with_bit(*order, false)};
}

bool same_point(const LaaksoPoint& a, const LaaksoPoint& b) { return canonicalize(a) == canonicalize(b); }

SProbeVerdict s_membership_probe(const Rational& t, const Rational& C, unsigned N, unsigned depth) {
  if (t <= 0 || t >= 1) throw std::invalid_argument("s_membership_probe requires t in (0,1)");
  if (C < 1) throw std::invalid_argument("s_membership_probe requires C >= 1");
  if (N == 0 || depth < N) throw std::invalid_argument("s_membership_probe requires 1 <= N <= depth");
  const Rational inv_c = 1 / C;
  for (unsigned n = N; n <= depth; ++n) {
    ExtRational up = gap_above(t, n), down = gap_below(t, n);
    bool ok = up.is_finite() && down.is_finite();
    if (ok) {
      Rational ratio = up.value() / down.value();
      ok = inv_c <= ratio && ratio <= C;
    }
    if (!ok) return {false, n, up, down};
  }
  return {};
}

}  // namespace laakso
