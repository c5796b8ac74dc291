#include "cantorsum/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cantorsum {

using nlohmann::json;

std::optional<Rational> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t slash = s.find('/');
  try {
    Rational q;
    if (slash == std::string::npos) {
      q = Rational(Integer(s, 10));
    } else {
      Integer num(s.substr(0, slash), 10);
      Integer den(s.substr(slash + 1), 10);
      if (den == 0) return std::nullopt;
      q = Rational(num, den);
    }
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::string to_string(const Rational& q) {
  return q.get_str();
}

std::string to_decimal(const Rational& q, int digits) {
  Rational scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Rational scaled = q * scale;
  // round half away from zero
  Integer rounded = floor_int(abs_rat(scaled) + rat(1, 2));
  bool neg = q < 0 && rounded != 0;
  std::string digits_str = rounded.get_str();
  if (static_cast<int>(digits_str.size()) <= digits)
    digits_str.insert(0, static_cast<std::size_t>(digits) + 1 - digits_str.size(), '0');
  std::string out = digits_str.substr(0, digits_str.size() - digits);
  if (digits > 0) out += "." + digits_str.substr(digits_str.size() - digits);
  return neg ? "-" + out : out;
}

namespace {

Rational require_rational(const json& j, const std::string& what) {
  if (!j.is_string())
    throw std::invalid_argument("expected rational string for " + what);
  auto q = parse_rational(j.get<std::string>());
  if (!q) throw std::invalid_argument("malformed rational in " + what);
  return *q;
}

json rational_json(const Rational& q) { return to_string(q); }

json word_json(const Word& w) {
  json arr = json::array();
  for (int a : w.letters) arr.push_back(a);
  return arr;
}

Word parse_word(const json& j) {
  Word w;
  for (const auto& v : j) w.letters.push_back(v.get<int>());
  return w;
}

json interval_json(const Interval& iv) {
  return json::array({rational_json(iv.lo), rational_json(iv.hi)});
}

Interval parse_interval(const json& j) {
  return {require_rational(j.at(0), "interval lo"),
          require_rational(j.at(1), "interval hi")};
}

json union_json(const IntervalUnion& u) {
  json arr = json::array();
  for (const auto& iv : u.parts()) arr.push_back(interval_json(iv));
  return arr;
}

IntervalUnion parse_union(const json& j) {
  std::vector<Interval> parts;
  for (const auto& v : j) parts.push_back(parse_interval(v));
  return IntervalUnion(std::move(parts));
}

json ifs_json(const HomogeneousIFS& ifs) {
  json j;
  j["hull"] = rational_json(ifs.hull);
  j["ratio"] = rational_json(ifs.ratio);
  json offs = json::array(), labels = json::array();
  for (const auto& e : ifs.offsets) offs.push_back(rational_json(e));
  for (const auto& l : ifs.labels) labels.push_back(l);
  j["offsets"] = offs;
  j["labels"] = labels;
  return j;
}

HomogeneousIFS ifs_from_json(const json& j) {
  if (j.contains("ratio") && j.at("ratio").is_string()) {
    std::string rs = j.at("ratio").get<std::string>();
    if (rs.rfind("alpha ", 0) == 0) {
      auto a = parse_rational(rs.substr(6));
      if (!a) throw std::invalid_argument("malformed alpha parameter");
      HomogeneousIFS ifs = middle_alpha(*a);
      if (j.contains("hull") && require_rational(j.at("hull"), "hull") != ifs.hull)
        throw std::invalid_argument("alpha form requires hull 1");
      return ifs;
    }
  }
  HomogeneousIFS ifs;
  ifs.hull = require_rational(j.at("hull"), "hull");
  ifs.ratio = require_rational(j.at("ratio"), "ratio");
  for (const auto& v : j.at("offsets"))
    ifs.offsets.push_back(require_rational(v, "offset"));
  if (j.contains("labels")) {
    for (const auto& v : j.at("labels")) ifs.labels.push_back(v.get<std::string>());
    if (ifs.labels.size() != ifs.offsets.size())
      throw std::invalid_argument("labels/offsets size mismatch");
  } else {
    for (std::size_t i = 0; i < ifs.offsets.size(); ++i)
      ifs.labels.push_back(std::to_string(i));
  }
  return ifs;
}

}  // namespace

HomogeneousIFS parse_ifs_config(const std::string& text) {
  return ifs_from_json(json::parse(text));
}

std::string serialize_ifs_config(const HomogeneousIFS& ifs) {
  return ifs_json(ifs).dump(2) + "\n";
}

HomogeneousIFS load_ifs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open IFS config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ifs_config(ss.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string serialize_interval_union(const IntervalUnion& u) {
  return union_json(u).dump(2) + "\n";
}

IntervalUnion parse_interval_union(const std::string& text) {
  return parse_union(json::parse(text));
}

std::string serialize_certificate(const Certificate& cert) {
  json j;
  j["mode"] = cert.mode == Mode::Cross ? "cross" : "self";
  j["base_K"] = ifs_json(cert.base_K);
  j["base_Kp"] = ifs_json(cert.base_Kp);
  j["perturbed_K"] = ifs_json(cert.perturbed_K);
  j["A1"] = cert.A1;
  j["A2"] = cert.A2;
  j["c0"] = rational_json(cert.c0);
  j["c2"] = rational_json(cert.c2);
  j["N"] = cert.N;
  j["seed"] = cert.omega0.seed;
  j["draw_index"] = cert.omega0.draw_index;
  json omega = json::object();
  for (const auto& [a, w] : cert.omega0.omega)
    omega[std::to_string(a)] = rational_json(w);
  j["omega0"] = omega;
  j["L0"] = union_json(cert.L0);
  j["L1"] = union_json(cert.L1);
  j["L"] = union_json(cert.L);
  json cover = json::array();
  for (const auto& e : cert.cover) {
    json entry;
    entry["t0"] = rational_json(e.t0);
    entry["cover"] = interval_json(e.cover);
    entry["b"] = word_json(e.witness.b);
    entry["bp"] = word_json(e.witness.bp);
    entry["t_hat0"] = rational_json(e.t_hat0);
    entry["image"] = interval_json(e.image);
    cover.push_back(std::move(entry));
  }
  j["cover"] = cover;
  if (cert.J) j["J"] = interval_json(*cert.J);
  j["vacuous"] = cert.vacuous;
  return j.dump(2) + "\n";
}

Certificate parse_certificate(const std::string& text) {
  json j = json::parse(text);
  Certificate cert;
  cert.mode = j.at("mode").get<std::string>() == "self" ? Mode::Self : Mode::Cross;
  cert.base_K = ifs_from_json(j.at("base_K"));
  cert.base_Kp = ifs_from_json(j.at("base_Kp"));
  cert.perturbed_K = ifs_from_json(j.at("perturbed_K"));
  cert.A1 = j.at("A1").get<std::vector<int>>();
  cert.A2 = j.at("A2").get<std::vector<int>>();
  cert.c0 = require_rational(j.at("c0"), "c0");
  cert.c2 = require_rational(j.at("c2"), "c2");
  cert.N = j.at("N").get<long>();
  cert.omega0.seed = j.at("seed").get<std::uint64_t>();
  cert.omega0.draw_index = j.at("draw_index").get<std::uint64_t>();
  for (const auto& [key, val] : j.at("omega0").items())
    cert.omega0.omega[std::stoi(key)] = require_rational(val, "omega0");
  cert.L0 = parse_union(j.at("L0"));
  cert.L1 = parse_union(j.at("L1"));
  cert.L = parse_union(j.at("L"));
  for (const auto& e : j.at("cover")) {
    CoverEntry entry;
    entry.t0 = require_rational(e.at("t0"), "t0");
    entry.cover = parse_interval(e.at("cover"));
    entry.witness.b = parse_word(e.at("b"));
    entry.witness.bp = parse_word(e.at("bp"));
    entry.t_hat0 = require_rational(e.at("t_hat0"), "t_hat0");
    entry.image = parse_interval(e.at("image"));
    cert.cover.push_back(std::move(entry));
  }
  if (j.contains("J")) cert.J = parse_interval(j.at("J"));
  cert.vacuous = j.at("vacuous").get<bool>();
  return cert;
}

std::string histogram_csv(const DensityHistogram& h, int decimals) {
  std::ostringstream out;
  out << "bin_center,mass,bin_center_exact,mass_exact\n";
  for (const auto& [k, m] : h.masses) {
    Rational center = Rational(k) * h.bin_width;
    out << to_decimal(center, decimals) << ',' << to_decimal(m, decimals) << ','
        << to_string(center) << ',' << to_string(m) << '\n';
  }
  return out.str();
}

}  // namespace cantorsum
