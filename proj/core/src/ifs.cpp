#include "cantorsum/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cantorsum {

Rational HomogeneousIFS::word_offset(const Word& w) const {
  Rational e = 0, scale = 1;
  for (int a : w.letters) {
    e += scale * offsets.at(a);
    scale *= ratio;
  }
  return e;
}

double HomogeneousIFS::dimension() const {
  return std::log(static_cast<double>(size())) / std::log(1.0 / to_double(ratio));
}

ValidationReport validate(const HomogeneousIFS& ifs) {
  ValidationReport rep;
  auto flag = [&rep](std::string what, std::vector<std::string> labels = {}) {
    rep.violations.push_back({std::move(what), std::move(labels)});
  };

  if (ifs.labels.empty() || ifs.offsets.size() != ifs.labels.size()) {
    flag("alphabet empty or labels/offsets size mismatch");
    return rep;
  }
  if (!(ifs.ratio > 0 && ifs.ratio < 1)) flag("ratio not in (0,1)");
  if (!(ifs.hull > 0)) flag("hull length not positive");
  if (!rep.violations.empty()) return rep;

  const Rational len = ifs.cylinder_length();
  for (int a = 0; a + 1 < ifs.size(); ++a) {
    if (ifs.offsets[a] > ifs.offsets[a + 1])
      flag("offsets not sorted ascending", {ifs.labels[a], ifs.labels[a + 1]});
    else if (ifs.offsets[a] + len >= ifs.offsets[a + 1] &&
             !(ifs.offsets[a] == ifs.offsets[a + 1] && ifs.size() == 1))
      flag("cylinders overlap or touch", {ifs.labels[a], ifs.labels[a + 1]});
  }
  if (ifs.offsets.front() != 0)
    flag("leftmost cylinder does not start at 0", {ifs.labels.front()});
  if (ifs.offsets.back() + len != ifs.hull)
    flag("rightmost cylinder does not end at the hull", {ifs.labels.back()});
  if (Rational(ifs.size()) * ifs.ratio >= 1 && ifs.size() > 1)
    flag("|A| * ratio >= 1");
  return rep;
}

HomogeneousIFS middle_alpha(const Rational& a) {
  if (!(a > 0 && a < rat(1, 2)))
    throw std::invalid_argument("middle_alpha: parameter must be in (0, 1/2)");
  HomogeneousIFS ifs;
  ifs.labels = {"0", "1"};
  ifs.offsets = {Rational(0), Rational(1) - a};
  ifs.ratio = a;
  ifs.hull = 1;
  return ifs;
}

HomogeneousIFS refine(const HomogeneousIFS& ifs, int n) {
  if (n < 1) throw std::invalid_argument("refine: n must be >= 1");
  auto rep = validate(ifs);
  if (!rep.ok()) throw std::invalid_argument("refine: input IFS invalid");
  double count = std::pow(static_cast<double>(ifs.size()), n);
  if (count > 1e6) throw std::invalid_argument("refine: alphabet would exceed cap");

  HomogeneousIFS out;
  out.ratio = pow_rat(ifs.ratio, static_cast<unsigned long>(n));
  out.hull = ifs.hull;
  out.labels = {""};
  out.offsets = {Rational(0)};
  for (int k = 0; k < n; ++k) {
    std::vector<std::string> labels;
    std::vector<Rational> offsets;
    labels.reserve(out.labels.size() * ifs.size());
    offsets.reserve(out.labels.size() * ifs.size());
    Rational scale = pow_rat(ifs.ratio, static_cast<unsigned long>(k));
    for (std::size_t i = 0; i < out.labels.size(); ++i) {
      for (int a = 0; a < ifs.size(); ++a) {
        labels.push_back(out.labels[i] + ifs.labels[a]);
        offsets.push_back(out.offsets[i] + scale * ifs.offsets[a]);
      }
    }
    out.labels = std::move(labels);
    out.offsets = std::move(offsets);
  }
  // Lexicographic enumeration of words is already ascending in offset for a
  // valid base, but sort defensively by (offset, label) to keep the invariant.
  std::vector<std::size_t> idx(out.labels.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return out.offsets[i] < out.offsets[j] ||
           (out.offsets[i] == out.offsets[j] && out.labels[i] < out.labels[j]);
  });
  HomogeneousIFS sorted = out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    sorted.labels[i] = out.labels[idx[i]];
    sorted.offsets[i] = out.offsets[idx[i]];
  }
  return sorted;
}

std::optional<std::pair<HomogeneousIFS, HomogeneousIFS>> common_ratio(
    const HomogeneousIFS& a, const HomogeneousIFS& b, int cap) {
  if (!validate(a).ok() || !validate(b).ok())
    throw std::invalid_argument("common_ratio: invalid input IFS");
  for (int total = 2; total <= 2 * cap; ++total) {
    for (int q = 1; q < total && q <= cap; ++q) {
      int p = total - q;
      if (p < 1 || p > cap) continue;
      if (pow_rat(a.ratio, q) == pow_rat(b.ratio, p)) {
        return std::make_pair(q == 1 ? a : refine(a, q),
                              p == 1 ? b : refine(b, p));
      }
    }
  }
  return std::nullopt;
}

HomogeneousIFS perturb(const HomogeneousIFS& ifs, const std::vector<int>& A1,
                       const std::map<int, Rational>& omega, const Rational& c0) {
  HomogeneousIFS out = ifs;
  for (int a : A1) {
    if (a <= 0 || a >= ifs.size() - 1)
      throw std::invalid_argument("perturb: A1 contains an endmost letter: " +
                                  (a >= 0 && a < ifs.size() ? ifs.labels[a]
                                                            : std::to_string(a)));
    Rational w = 0;
    if (auto it = omega.find(a); it != omega.end()) w = it->second;
    if (w < -1 || w > 1)
      throw std::invalid_argument("perturb: omega component outside [-1,1]");
    out.offsets[a] += c0 * ifs.ratio * w * ifs.hull;
  }
  const Rational len = out.cylinder_length();
  for (int a = 0; a + 1 < out.size(); ++a) {
    if (out.offsets[a] + len >= out.offsets[a + 1])
      throw std::invalid_argument("perturb: cylinders collide: " +
                                  out.labels[a] + " and " + out.labels[a + 1]);
  }
  return out;
}

std::optional<Rational> closeness(const HomogeneousIFS& a, const HomogeneousIFS& b) {
  if (a.hull != b.hull) return std::nullopt;
  if (a.labels != b.labels) return std::nullopt;
  if (a.cylinder_length() != b.cylinder_length()) return std::nullopt;
  Rational eps = 0;
  const Rational len = a.cylinder_length();
  for (int i = 0; i < a.size(); ++i) {
    Rational d = abs_rat(b.offsets[i] - a.offsets[i]) / len;
    if (d > eps) eps = d;
  }
  return eps;
}

ConstantsConfig ConstantsConfig::defaults(const Rational& s0, Rational c2_value) {
  ConstantsConfig c;
  c.c0 = Rational(3) + 2 * s0;
  c.c2 = std::move(c2_value);
  c.check(s0);
  return c;
}

void ConstantsConfig::check(const Rational& s0) const {
  if (c0 < Rational(3) + 2 * s0)
    throw std::invalid_argument("constants: c0 must be >= 3 + 2*s0");
  if (!(c2 > 0)) throw std::invalid_argument("constants: c2 must be positive");
}

}  // namespace cantorsum
