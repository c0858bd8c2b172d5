#include "torus/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace torus {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_int_str(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

bool is_rat_str(const std::string& s) {
  std::size_t slash = s.find('/');
  if (slash == std::string::npos) return is_int_str(s);
  return is_int_str(s.substr(0, slash)) && is_int_str(s.substr(slash + 1));
}

Int parse_int(const std::string& raw) {
  std::string s = trim(raw);
  if (!is_int_str(s)) throw std::invalid_argument("bad integer: " + raw);
  return Int(s);
}

// Splits on commas outside (), [].
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string double_to_string(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Dyadic dyadic_from_string(const std::string& s) {
  Rat r = parse_rat(s);
  const Int& den = r.get_den();
  if (mpz_popcount(den.get_mpz_t()) != 1)
    throw std::invalid_argument(
        "interval endpoints must be dyadic rationals: " + s);
  long k = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) - 1;
  return Dyadic(r.get_num(), -k);
}

std::string metric_to_string(const Metric& m) {
  return m.kind == Metric::Kind::Sup ? "sup" : "omega";
}

Metric metric_from_string(const std::string& s) {
  if (s == "sup") return Metric::sup();
  if (s == "omega") return Metric::omega();
  throw std::invalid_argument("unknown metric: " + s);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

const Json& require_key(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw std::invalid_argument(std::string("missing key: ") + key);
  return j.at(key);
}

std::size_t json_to_size(const Json& j) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw std::invalid_argument("expected a nonnegative integer");
  auto v = j.get<std::int64_t>();
  if (v < 0) throw std::invalid_argument("expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string rat_to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat parse_rat(const std::string& s) {
  std::string t = trim(s);
  if (!is_rat_str(t)) throw std::invalid_argument("bad rational: " + s);
  Rat r(t);
  if (sgn(r.get_den()) == 0)
    throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string real_to_string(const Real& x) {
  if (x.is_rational()) return rat_to_string(x.as_rat());
  if (x.is_quadratic()) {
    const QuadIrr& q = x.as_quad();
    return "sqrt(" + q.d.get_str() + "):" + q.a.get_str() + "," +
           q.b.get_str() + "," + q.c.get_str();
  }
  const Interval& i = x.as_interval();
  long bits = 0;
  if (-i.lo.exp > bits) bits = -i.lo.exp;
  if (-i.hi.exp > bits) bits = -i.hi.exp;
  return "[" + rat_to_string(i.lo.to_rat()) + "," +
         rat_to_string(i.hi.to_rat()) + "]@" + std::to_string(bits);
}

Real parse_real(const std::string& s) {
  std::string t = trim(s);
  if (t.rfind("sqrt(", 0) == 0) {
    std::size_t close = t.find(')');
    if (close == std::string::npos || close + 1 >= t.size() ||
        t[close + 1] != ':')
      throw std::invalid_argument("bad quadratic form: " + s);
    Int d = parse_int(t.substr(5, close - 5));
    auto parts = split_top(t.substr(close + 2));
    if (parts.size() != 3)
      throw std::invalid_argument("quadratic form needs a,b,c: " + s);
    return Real::quadratic(parse_int(parts[0]), parse_int(parts[1]),
                           parse_int(parts[2]), d);
  }
  if (!t.empty() && t[0] == '[') {
    std::size_t close = t.find(']');
    std::size_t at = t.find('@');
    if (close == std::string::npos || at == std::string::npos || at < close)
      throw std::invalid_argument("bad interval form: " + s);
    auto parts = split_top(t.substr(1, close - 1));
    if (parts.size() != 2)
      throw std::invalid_argument("interval form needs lo,hi: " + s);
    std::string bits = trim(t.substr(at + 1));
    if (!is_int_str(bits) || bits[0] == '-')
      throw std::invalid_argument("bad interval precision: " + s);
    return Real::interval(
        Interval(dyadic_from_string(parts[0]), dyadic_from_string(parts[1])));
  }
  return Real(parse_rat(t));
}

std::string char_to_string(const Character& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
    if (i) out += ",";
    out += c.coeffs[i].get_str();
  }
  return out + ")";
}

Character parse_character(const std::string& s) {
  std::string t = trim(s);
  if (t.empty()) throw std::invalid_argument("empty character");
  if (t.front() == '(') {
    if (t.back() != ')')
      throw std::invalid_argument("unbalanced character: " + s);
    auto parts = split_top(t.substr(1, t.size() - 2));
    std::vector<Int> coeffs;
    for (const auto& p : parts) coeffs.push_back(parse_int(p));
    return Character(std::move(coeffs));
  }
  return Character::one_dim(parse_int(t));
}

std::string point_to_string(const TorusPoint& p) {
  if (p.dim() == 1) return real_to_string(p.x[0].rep());
  std::string out = "(";
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) out += ",";
    out += real_to_string(p.x[i].rep());
  }
  return out + ")";
}

TorusPoint parse_point(const std::string& s) {
  std::string t = trim(s);
  if (t.empty()) throw std::invalid_argument("empty point");
  std::vector<std::string> parts;
  if (t.front() == '(' && t.rfind("sqrt(", 0) != 0) {
    if (t.back() != ')') throw std::invalid_argument("unbalanced point: " + s);
    parts = split_top(t.substr(1, t.size() - 2));
    for (const auto& p : parts)
      if (trim(p).rfind("sqrt(", 0) == 0)
        throw std::invalid_argument(
            "quadratic coordinates need the JSON array form: " + s);
  } else {
    parts.push_back(t);
  }
  std::vector<CircleValue> coords;
  for (const auto& p : parts) coords.push_back(CircleValue(parse_real(p)));
  return TorusPoint(std::move(coords));
}

Json int_to_json(const Int& v) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) <= 53)
    return Json(static_cast<std::int64_t>(v.get_si()));
  return Json(v.get_str());
}

Int json_to_int(const Json& j) {
  if (j.is_number_unsigned())
    return Int(static_cast<unsigned long>(j.get<std::uint64_t>()));
  if (j.is_number_integer())
    return Int(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) return parse_int(j.get<std::string>());
  throw std::invalid_argument("expected an integer or integer string");
}

Json point_to_json(const TorusPoint& p) {
  if (p.dim() == 1) return Json(real_to_string(p.x[0].rep()));
  Json arr = Json::array();
  for (const auto& c : p.x) arr.push_back(real_to_string(c.rep()));
  return arr;
}

TorusPoint point_from_json(const Json& j) {
  if (j.is_string()) return parse_point(j.get<std::string>());
  if (j.is_number_integer() || j.is_number_unsigned())
    return TorusPoint({CircleValue(Rat(json_to_int(j)))});
  if (j.is_array()) {
    std::vector<CircleValue> coords;
    for (const auto& c : j) {
      if (c.is_string())
        coords.push_back(CircleValue(parse_real(c.get<std::string>())));
      else
        coords.push_back(CircleValue(Rat(json_to_int(c))));
    }
    return TorusPoint(std::move(coords));
  }
  throw std::invalid_argument("expected a point");
}

Json char_to_json(const Character& c) {
  if (c.dim() == 1) return int_to_json(c.coeffs[0]);
  Json arr = Json::array();
  for (const auto& v : c.coeffs) arr.push_back(int_to_json(v));
  return arr;
}

Character char_from_json(const Json& j) {
  if (j.is_array()) {
    std::vector<Int> coeffs;
    for (const auto& v : j) coeffs.push_back(json_to_int(v));
    return Character(std::move(coeffs));
  }
  return Character::one_dim(json_to_int(j));
}

Json matrix_to_json(const IntMatrix& m) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(int_to_json(m.at(i, j)));
    arr.push_back(std::move(row));
  }
  return arr;
}

IntMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a matrix");
  std::size_t rows = j.size();
  if (rows == 0) return IntMatrix(0, 0);
  std::size_t cols = j.at(0).size();
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j.at(i).size() != cols)
      throw std::invalid_argument("ragged matrix rows");
    for (std::size_t k = 0; k < cols; ++k)
      m.at(i, k) = json_to_int(j.at(i).at(k));
  }
  return m;
}

Json charset_to_json(const CharSet& b) {
  Json out = Json::object();
  Json levels = Json::array();
  for (const auto& lvl : b.levels()) {
    Json one = Json::array();
    for (const auto& c : lvl) one.push_back(char_to_json(c));
    levels.push_back(std::move(one));
  }
  out["levels"] = std::move(levels);
  out["dim"] = b.dim();
  return out;
}

CharSet charset_from_json(const Json& j) {
  const Json& levels = require_key(j, "levels");
  if (!levels.is_array()) throw std::invalid_argument("levels must be an array");
  std::size_t dim = 0;
  if (j.contains("dim")) dim = json_to_size(j.at("dim"));
  if (dim == 0) {
    dim = 1;
    for (const auto& lvl : levels)
      for (const auto& c : lvl)
        if (c.is_array()) dim = c.size();
  }
  CharSet out(dim);
  for (const auto& lvl : levels) {
    if (!lvl.is_array()) throw std::invalid_argument("level must be an array");
    std::vector<Character> chars;
    for (const auto& c : lvl) {
      Character phi = char_from_json(c);
      if (phi.dim() != dim)
        throw std::invalid_argument("character dimension mismatch in levels");
      chars.push_back(std::move(phi));
    }
    out.push_level(std::move(chars));
  }
  return out;
}

Json tower_to_json(const Tower& t) {
  Json out = Json::object();
  switch (t.kind) {
    case Tower::Kind::WordBall: out["kind"] = "word-ball"; break;
    case Tower::Kind::Refinement: out["kind"] = "refinement"; break;
    case Tower::Kind::Explicit: out["kind"] = "explicit"; break;
  }
  out["dim"] = t.dim;
  out["metric"] = metric_to_string(t.metric);
  if (t.kind == Tower::Kind::WordBall) {
    Json gens = Json::array();
    for (const auto& g : t.generators) gens.push_back(point_to_json(g));
    out["generators"] = std::move(gens);
    if (t.irrational_dependency)
      out["dependency"] = matrix_to_json(*t.irrational_dependency);
  } else if (t.kind == Tower::Kind::Refinement) {
    Json bases = Json::array();
    for (const auto& b : t.bases) bases.push_back(int_to_json(b));
    out["bases"] = std::move(bases);
  } else {
    Json stages = Json::array();
    for (const auto& st : t.explicit_stages) {
      Json one = Json::array();
      for (const auto& p : st) one.push_back(point_to_json(p));
      stages.push_back(std::move(one));
    }
    out["stages"] = std::move(stages);
    if (t.declared_dense) out["dense"] = *t.declared_dense;
  }
  return out;
}

Tower tower_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("expected a tower object");
  std::string kind;
  if (j.contains("kind")) kind = j.at("kind").get<std::string>();
  else if (j.contains("stages")) kind = "explicit";
  else if (j.contains("bases")) kind = "refinement";
  else if (j.contains("generators")) kind = "word-ball";
  else throw std::invalid_argument("tower kind is not recognizable");

  Metric metric = Metric::sup();
  if (j.contains("metric"))
    metric = metric_from_string(j.at("metric").get<std::string>());

  if (kind == "explicit") {
    std::vector<std::vector<TorusPoint>> stages;
    for (const auto& st : require_key(j, "stages")) {
      std::vector<TorusPoint> pts;
      for (const auto& p : st) pts.push_back(point_from_json(p));
      stages.push_back(std::move(pts));
    }
    std::size_t dim = 0;
    if (j.contains("dim")) dim = json_to_size(j.at("dim"));
    if (dim == 0) {
      for (const auto& st : stages)
        for (const auto& p : st) { dim = p.dim(); break; }
      if (dim == 0) throw std::invalid_argument("cannot infer the dimension");
    }
    std::optional<bool> dense;
    if (j.contains("dense")) dense = j.at("dense").get<bool>();
    return explicit_tower(std::move(stages), dim, dense, metric);
  }
  if (kind == "refinement") {
    std::vector<Int> bases;
    for (const auto& b : require_key(j, "bases")) bases.push_back(json_to_int(b));
    std::size_t dim = bases.size();
    if (j.contains("dim")) dim = json_to_size(j.at("dim"));
    return refinement_tower(std::move(bases), dim, metric);
  }
  if (kind == "word-ball") {
    std::vector<TorusPoint> gens;
    for (const auto& g : require_key(j, "generators"))
      gens.push_back(point_from_json(g));
    std::size_t dim = gens.empty() ? 0 : gens[0].dim();
    if (j.contains("dim")) dim = json_to_size(j.at("dim"));
    if (dim == 0) throw std::invalid_argument("cannot infer the dimension");
    std::optional<IntMatrix> dep;
    if (j.contains("dependency") && !j.at("dependency").is_null())
      dep = matrix_from_json(j.at("dependency"));
    return word_ball_tower(std::move(gens), dim, std::move(dep), metric);
  }
  throw std::invalid_argument("unknown tower kind: " + kind);
}

Json certificate_to_json(const CoveringCertificate& c) {
  Json out = Json::object();
  out["n"] = c.n;
  Json f = Json::array();
  for (const auto& p : c.F) f.push_back(point_to_json(p));
  out["F"] = std::move(f);
  out["eps"] = rat_to_string(c.eps);
  Json b = Json::array();
  for (const auto& phi : c.B) b.push_back(char_to_json(phi));
  out["B"] = std::move(b);
  Json arcs = Json::array();
  for (const auto& a : c.arcs) {
    Json one = Json::array();
    one.push_back(rat_to_string(a.lo));
    one.push_back(rat_to_string(a.hi));
    one.push_back(a.phi.get_str());
    arcs.push_back(std::move(one));
  }
  out["arcs"] = std::move(arcs);
  Json e = Json::array();
  for (const auto& p : c.E) e.push_back(point_to_json(p));
  out["E"] = std::move(e);
  out["tol"] = rat_to_string(c.tol);
  out["delta_next"] = c.delta_next ? Json(rat_to_string(*c.delta_next)) : Json();
  out["dim"] = c.dim;
  out["metric"] = metric_to_string(c.metric);
  if (!c.cells.empty()) {
    Json cells = Json::array();
    for (const auto& cell : c.cells) {
      Json one = Json::object();
      one["box"] = Json::array({rat_to_string(cell.x0), rat_to_string(cell.x1),
                                rat_to_string(cell.y0), rat_to_string(cell.y1)});
      one["kind"] = cell.kind;
      one["ref"] = cell.ref;
      cells.push_back(std::move(one));
    }
    out["cells"] = std::move(cells);
  }
  return out;
}

CoveringCertificate certificate_from_json(const Json& j) {
  CoveringCertificate c;
  c.n = json_to_size(require_key(j, "n"));
  for (const auto& p : require_key(j, "F")) c.F.push_back(point_from_json(p));
  c.eps = parse_rat(require_key(j, "eps").get<std::string>());
  for (const auto& phi : require_key(j, "B")) c.B.push_back(char_from_json(phi));
  if (j.contains("arcs"))
    for (const auto& a : j.at("arcs")) {
      if (!a.is_array() || a.size() != 3)
        throw std::invalid_argument("arc entries are [lo,hi,phi]");
      ArcPiece piece;
      piece.lo = parse_rat(a.at(0).get<std::string>());
      piece.hi = parse_rat(a.at(1).get<std::string>());
      piece.phi = json_to_int(a.at(2));
      c.arcs.push_back(std::move(piece));
    }
  if (j.contains("E"))
    for (const auto& p : j.at("E")) c.E.push_back(point_from_json(p));
  if (j.contains("tol")) c.tol = parse_rat(j.at("tol").get<std::string>());
  else c.tol = rat_pow2(-(static_cast<long>(c.n) + 2));
  if (j.contains("delta_next") && !j.at("delta_next").is_null())
    c.delta_next = parse_rat(j.at("delta_next").get<std::string>());
  c.dim = j.contains("dim") ? json_to_size(j.at("dim")) : 1;
  if (j.contains("metric"))
    c.metric = metric_from_string(j.at("metric").get<std::string>());
  if (j.contains("cells"))
    for (const auto& cell : j.at("cells")) {
      CoverCell cc;
      const Json& box = require_key(cell, "box");
      if (!box.is_array() || box.size() != 4)
        throw std::invalid_argument("cell box is [x0,x1,y0,y1]");
      cc.x0 = parse_rat(box.at(0).get<std::string>());
      cc.x1 = parse_rat(box.at(1).get<std::string>());
      cc.y0 = parse_rat(box.at(2).get<std::string>());
      cc.y1 = parse_rat(box.at(3).get<std::string>());
      cc.kind = static_cast<int>(json_to_size(require_key(cell, "kind")));
      cc.ref = json_to_size(require_key(cell, "ref"));
      c.cells.push_back(std::move(cc));
    }
  return c;
}

Json chain_to_json(const ChainSpec& c) {
  Json out = Json::object();
  switch (c.ambient) {
    case ChainSpec::Ambient::Torus: out["ambient"] = "torus"; break;
    case ChainSpec::Ambient::TruncatedProduct:
      out["ambient"] = "truncated-product";
      break;
    case ChainSpec::Ambient::CyclicProduct:
      out["ambient"] = "cyclic-product";
      break;
  }
  out["dim"] = c.dim;
  if (c.ambient == ChainSpec::Ambient::CyclicProduct) {
    Json orders = Json::array();
    for (const auto& m : c.cyclic_orders) orders.push_back(int_to_json(m));
    out["orders"] = std::move(orders);
  }
  out["strict"] = c.strict;
  Json stages = Json::array();
  for (const auto& st : c.stages) {
    Json one = Json::object();
    if (st.kind == ChainSpec::StageKind::CoordinatePattern) {
      one["pattern"] = st.pattern_coords;
    } else {
      Json gens = Json::array();
      for (const auto& g : st.generators) gens.push_back(point_to_json(g));
      one["generators"] = std::move(gens);
    }
    stages.push_back(std::move(one));
  }
  out["stages"] = std::move(stages);
  return out;
}

ChainSpec chain_from_json(const Json& j) {
  ChainSpec c;
  std::string ambient = "torus";
  if (j.contains("ambient")) ambient = j.at("ambient").get<std::string>();
  if (ambient == "torus") c.ambient = ChainSpec::Ambient::Torus;
  else if (ambient == "truncated-product")
    c.ambient = ChainSpec::Ambient::TruncatedProduct;
  else if (ambient == "cyclic-product")
    c.ambient = ChainSpec::Ambient::CyclicProduct;
  else throw std::invalid_argument("unknown ambient: " + ambient);

  if (j.contains("orders"))
    for (const auto& m : j.at("orders")) c.cyclic_orders.push_back(json_to_int(m));
  if (j.contains("dim")) c.dim = json_to_size(j.at("dim"));
  else if (c.ambient == ChainSpec::Ambient::CyclicProduct)
    c.dim = c.cyclic_orders.size();
  else throw std::invalid_argument("chain needs a dim");
  if (j.contains("strict")) c.strict = j.at("strict").get<bool>();

  for (const auto& st : require_key(j, "stages")) {
    ChainSpec::Stage stage;
    if (st.contains("pattern")) {
      stage.kind = ChainSpec::StageKind::CoordinatePattern;
      stage.pattern_coords = json_to_size(st.at("pattern"));
    } else {
      stage.kind = ChainSpec::StageKind::Generators;
      for (const auto& g : require_key(st, "generators"))
        stage.generators.push_back(point_from_json(g));
    }
    c.stages.push_back(std::move(stage));
  }
  return c;
}

Json witness_to_json(const RefutationWitness& w) {
  Json out = Json::object();
  out["stages"] = w.stages;
  Json coords = Json::array();
  for (auto c : w.coords) coords.push_back(c);
  out["coords"] = std::move(coords);
  Json t = Json::array();
  for (const auto& v : w.t) t.push_back(rat_to_string(v));
  out["t"] = std::move(t);
  out["x"] = point_to_json(w.x);
  Json yd = Json::array();
  for (const auto& v : w.y_dist) yd.push_back(rat_to_string(v));
  out["y_dist"] = std::move(yd);
  Json td = Json::array();
  for (const auto& v : w.tail_dist) td.push_back(rat_to_string(v));
  out["tail_dist"] = std::move(td);
  return out;
}

RefutationWitness witness_from_json(const Json& j) {
  RefutationWitness w;
  w.stages = json_to_size(require_key(j, "stages"));
  for (const auto& c : require_key(j, "coords")) w.coords.push_back(json_to_size(c));
  for (const auto& v : require_key(j, "t"))
    w.t.push_back(parse_rat(v.get<std::string>()));
  w.x = point_from_json(require_key(j, "x"));
  for (const auto& v : require_key(j, "y_dist"))
    w.y_dist.push_back(parse_rat(v.get<std::string>()));
  for (const auto& v : require_key(j, "tail_dist"))
    w.tail_dist.push_back(parse_rat(v.get<std::string>()));
  return w;
}

Json profile_to_json(const TailProfile& p) {
  Json out = Json::object();
  out["x"] = point_to_json(p.x);
  out["prefix"] = p.prefix_len;
  out["threshold"] = rat_to_string(p.threshold);
  switch (p.verdict) {
    case TailProfile::Verdict::MemberSoFar: out["verdict"] = "member-so-far"; break;
    case TailProfile::Verdict::WitnessFound: out["verdict"] = "witness-found"; break;
    case TailProfile::Verdict::Undetermined: out["verdict"] = "undetermined"; break;
  }
  Json wit = Json::array();
  for (auto i : p.witnesses) wit.push_back(i);
  out["witnesses"] = std::move(wit);
  Json entries = Json::array();
  for (const auto& e : p.entries) {
    Json one = Json::object();
    one["index"] = e.index;
    one["level"] = e.level;
    one["phi"] = char_to_json(e.phi);
    one["value"] = real_to_string(e.value);
    one["err"] = rat_to_string(e.err);
    one["vs"] = e.vs_threshold;
    one["exact_zero"] = e.exact_zero;
    entries.push_back(std::move(one));
  }
  out["entries"] = std::move(entries);
  Json tails = Json::array();
  for (const auto& v : p.tail_max) tails.push_back(rat_to_string(v));
  out["tail_max"] = std::move(tails);
  return out;
}

std::string profile_to_csv(const TailProfile& p) {
  std::ostringstream out;
  out << "level,phi,value,err\n";
  for (const auto& e : p.entries) {
    std::string phi = e.phi.dim() == 1 ? e.phi.coeffs[0].get_str()
                                       : char_to_string(e.phi);
    out << e.level << ',' << csv_field(phi) << ','
        << double_to_string(e.value.to_double()) << ','
        << double_to_string(e.err.get_d()) << '\n';
  }
  return out.str();
}

Json measure_report_to_json(const MeasureReport& r) {
  Json out = Json::object();
  out["prefix"] = r.prefix_len;
  out["delta"] = rat_to_string(r.delta);
  out["measure"] = rat_to_string(r.measure);
  Json arcs = Json::array();
  for (const auto& a : r.arcs.arcs())
    arcs.push_back(Json::array({rat_to_string(a.lo), rat_to_string(a.hi)}));
  out["arcs"] = std::move(arcs);
  return out;
}

Json mc_to_json(const MonteCarloEstimate& e) {
  Json out = Json::object();
  out["samples"] = e.samples;
  out["hits"] = e.hits;
  out["estimate"] = e.estimate;
  out["std_error"] = e.std_error;
  out["seed"] = e.seed;
  return out;
}

Json separation_to_json(const std::vector<SeparationStep>& steps) {
  Json arr = Json::array();
  for (const auto& s : steps) {
    Json one = Json::object();
    one["n"] = s.n;
    one["u"] = char_to_json(s.u);
    one["value_at_x"] = real_to_string(s.value_at_x);
    one["stage_bound"] = rat_to_string(s.stage_bound);
    one["max_on_stage"] = real_to_string(s.max_on_stage);
    arr.push_back(std::move(one));
  }
  return arr;
}

Json chain_steps_to_json(const std::vector<ChainStep>& steps) {
  Json arr = Json::array();
  for (const auto& s : steps) {
    Json one = Json::object();
    one["n"] = s.n;
    one["u"] = char_to_json(s.u);
    one["value"] = real_to_string(s.value);
    arr.push_back(std::move(one));
  }
  return arr;
}

Json condition_c_to_json(const ConditionC& c) {
  Json out = Json::object();
  out["holds"] = c.holds;
  if (c.holds) out["m"] = c.m;
  out["first_infinite"] =
      c.first_infinite ? Json(*c.first_infinite) : Json();
  Json idx = Json::array();
  for (const auto& i : c.indices)
    idx.push_back(i ? int_to_json(*i) : Json());
  out["indices"] = std::move(idx);
  out["reason"] = c.reason;
  return out;
}

Json partition_to_json(const BPartition& p) {
  Json out = Json::object();
  Json buckets = Json::array();
  for (const auto& b : p.buckets) {
    Json one = Json::array();
    for (const auto& phi : b) one.push_back(char_to_json(phi));
    buckets.push_back(std::move(one));
  }
  out["buckets"] = std::move(buckets);
  Json viol = Json::array();
  for (const auto& phi : p.violations) viol.push_back(char_to_json(phi));
  out["violations"] = std::move(viol);
  Json counts = Json::array();
  for (auto n : p.non_annihilating) counts.push_back(n);
  out["non_annihilating"] = std::move(counts);
  return out;
}

Json characterization_to_json(const Characterization& c) {
  Json out = Json::object();
  switch (c.mode) {
    case Characterization::Mode::Dense: out["mode"] = "dense"; break;
    case Characterization::Mode::ClosedSubgroup: out["mode"] = "subgroup"; break;
    case Characterization::Mode::Lifted: out["mode"] = "lifted"; break;
  }
  out["B"] = charset_to_json(c.B);
  if (!c.certs.empty()) {
    Json certs = Json::array();
    for (const auto& cert : c.certs) certs.push_back(certificate_to_json(cert));
    out["certificates"] = std::move(certs);
  }
  if (c.subgroup) {
    out["annihilator"] = matrix_to_json(c.subgroup->ann);
    out["order"] =
        c.subgroup->order ? int_to_json(*c.subgroup->order) : Json();
  }
  if (!c.checked_points.empty()) {
    Json pts = Json::array();
    for (const auto& p : c.checked_points) pts.push_back(point_to_json(p));
    out["checked_points"] = std::move(pts);
  }
  if (c.embedding) out["embedding"] = matrix_to_json(*c.embedding);
  if (c.inner) out["inner"] = characterization_to_json(*c.inner);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace torus
