#include "stc/delay.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "stc/errors.hpp"

namespace stc {

namespace {

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("delay spec: cannot parse " + std::string(what) + " '" +
                      std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

DelayModel DelayModel::zero() { return DelayModel{}; }

DelayModel DelayModel::constant(double d) {
  DelayModel m;
  m.kind_ = Kind::constant;
  m.a_ = d;
  return m;
}

DelayModel DelayModel::uniform(double lo, double hi, std::uint64_t seed) {
  if (!(lo <= hi)) throw ConfigError("uniform delay: lo must not exceed hi");
  DelayModel m;
  m.kind_ = Kind::uniform;
  m.a_ = lo;
  m.b_ = hi;
  m.seed_ = seed;
  m.rng_.seed(seed);
  return m;
}

DelayModel DelayModel::sequence(std::vector<double> values) {
  if (values.empty()) throw ConfigError("delay sequence must not be empty");
  DelayModel m;
  m.kind_ = Kind::sequence;
  m.values_ = std::move(values);
  return m;
}

DelayModel DelayModel::parse(std::string_view spec) {
  const auto parts = split(spec, ':');
  const auto head = parts.front();
  if (head == "zero" && parts.size() == 1) return zero();
  if (head == "constant" && parts.size() == 2) {
    return constant(parse_double(parts[1], "delay"));
  }
  if (head == "uniform" && parts.size() == 4) {
    std::uint64_t seed = 0;
    const auto s = parts[3];
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("delay spec: bad seed '" + std::string(s) + "'");
    }
    return uniform(parse_double(parts[1], "lower bound"), parse_double(parts[2], "upper bound"),
                   seed);
  }
  if (head == "file" && parts.size() >= 2) {
    const auto path = std::string(spec.substr(5));
    std::ifstream in(path);
    if (!in) throw ConfigError("delay spec: cannot open '" + path + "'");
    std::vector<double> values;
    std::string token;
    while (in >> token) values.push_back(parse_double(token, "delay"));
    return sequence(std::move(values));
  }
  throw ConfigError("delay spec: expected zero | constant:<d> | uniform:<lo>:<hi>:<seed> | "
                    "file:<path>, got '" + std::string(spec) + "'");
}

std::string DelayModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::zero: os << "zero"; break;
    case Kind::constant: os << "constant:" << a_; break;
    case Kind::uniform: os << "uniform:" << a_ << ':' << b_ << ':' << seed_; break;
    case Kind::sequence: os << "sequence(" << values_.size() << ")"; break;
  }
  return os.str();
}

void DelayModel::validate(double tau_mad) const {
  auto check = [tau_mad](double d) {
    if (!(d >= 0.0 && d <= tau_mad)) {
      std::ostringstream os;
      os << "delay " << d << " outside [0, tau_mad = " << tau_mad << "]";
      throw ConfigError(os.str());
    }
  };
  switch (kind_) {
    case Kind::zero: break;
    case Kind::constant: check(a_); break;
    case Kind::uniform: check(a_); check(b_); break;
    case Kind::sequence: for (double d : values_) check(d); break;
  }
}

double DelayModel::next() {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::constant: return a_;
    case Kind::uniform: {
      std::uniform_real_distribution<double> dist(a_, b_);
      return dist(rng_);
    }
    case Kind::sequence: {
      const double d = values_[cursor_];
      cursor_ = (cursor_ + 1) % values_.size();
      return d;
    }
  }
  return 0.0;
}

void DelayModel::reset() {
  cursor_ = 0;
  rng_.seed(seed_);
}

}  // namespace stc
