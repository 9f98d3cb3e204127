#include "warpcheck/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "warpcheck/errors.hpp"
#include "warpcheck/killing.hpp"
#include "warpcheck/spacetime.hpp"

namespace warpcheck {

namespace {

struct Item {
  std::string text;
  bool quoted = false;
};

struct Entry {
  std::string key;
  std::vector<Item> values;
  int line = 0;
};

struct Section {
  std::string type;
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

class Located {
 public:
  explicit Located(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(int line, const std::string& message) const {
    throw ConfigError(origin_ + ":" + std::to_string(line) + ": " + message);
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
};

std::vector<Item> split_values(std::string_view text, int line, const Located& where) {
  std::vector<Item> items;
  std::size_t i = 0;
  const auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  while (true) {
    skip();
    Item item;
    if (i < text.size() && text[i] == '"') {
      const auto close = text.find('"', i + 1);
      if (close == std::string_view::npos) where.fail(line, "unterminated string");
      item.text = std::string(text.substr(i + 1, close - i - 1));
      item.quoted = true;
      i = close + 1;
      skip();
    } else {
      const auto comma = std::min(text.find(',', i), text.size());
      item.text = trim(text.substr(i, comma - i));
      if (item.text.find('"') != std::string::npos) where.fail(line, "stray quote in value");
      i = comma;
    }
    if (!item.quoted && item.text.empty()) where.fail(line, "empty value");
    items.push_back(std::move(item));
    if (i >= text.size()) break;
    if (text[i] != ',') where.fail(line, "expected ',' between values");
    ++i;
  }
  return items;
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::vector<Section> read_sections(std::string_view text, const Located& where) {
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') where.fail(line, "section header must end with ']'");
      std::istringstream words(s.substr(1, s.size() - 2));
      Section sec;
      std::string extra;
      words >> sec.type >> sec.name;
      if (words >> extra || sec.name.empty()) where.fail(line, "section header must be [type name]");
      if (!valid_name(sec.name)) where.fail(line, "invalid name '" + sec.name + "'");
      sec.line = line;
      sections.push_back(std::move(sec));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) where.fail(line, "expected 'key = value'");
    if (sections.empty()) where.fail(line, "key outside of any section");
    Entry e;
    e.key = trim(std::string_view(s).substr(0, eq));
    e.line = line;
    if (e.key.empty()) where.fail(line, "missing key");
    e.values = split_values(std::string_view(s).substr(eq + 1), line, where);
    sections.back().entries.push_back(std::move(e));
  }
  return sections;
}

/// Key lookup with location-aware errors; reports keys nobody asked for.
class Keys {
 public:
  Keys(const Section& sec, const Located& where) : sec_(sec), where_(where) {
    std::set<std::string> seen;
    for (const auto& e : sec.entries)
      if (e.key != "positive" && !seen.insert(e.key).second) where.fail(e.line, "duplicate key '" + e.key + "'");
  }

  const Entry* find(const std::string& key) {
    used_.insert(key);
    for (const auto& e : sec_.entries)
      if (e.key == key) return &e;
    return nullptr;
  }

  const Entry& require(const std::string& key) {
    const Entry* e = find(key);
    if (!e) where_.fail(sec_.line, "[" + sec_.type + " " + sec_.name + "] is missing '" + key + "'");
    return *e;
  }

  std::vector<const Entry*> all(const std::string& key) {
    used_.insert(key);
    std::vector<const Entry*> out;
    for (const auto& e : sec_.entries)
      if (e.key == key) out.push_back(&e);
    return out;
  }

  /// Entries whose key starts with `prefix`, marked used.
  std::vector<const Entry*> prefixed(const std::string& prefix) {
    std::vector<const Entry*> out;
    for (const auto& e : sec_.entries)
      if (e.key.rfind(prefix, 0) == 0) {
        used_.insert(e.key);
        out.push_back(&e);
      }
    return out;
  }

  void finish() const {
    for (const auto& e : sec_.entries)
      if (!used_.count(e.key))
        where_.fail(e.line, "unknown key '" + e.key + "' in [" + sec_.type + " " + sec_.name + "]");
  }

  std::string word(const Entry& e) const {
    if (e.values.size() != 1 || e.values[0].quoted) where_.fail(e.line, "'" + e.key + "' takes one bare word");
    return e.values[0].text;
  }

  std::string quoted(const Entry& e) const {
    if (e.values.size() != 1 || !e.values[0].quoted)
      where_.fail(e.line, "'" + e.key + "' takes one quoted expression");
    return e.values[0].text;
  }

  std::vector<std::string> quoted_list(const Entry& e) const {
    std::vector<std::string> out;
    for (const auto& v : e.values) {
      if (!v.quoted) where_.fail(e.line, "'" + e.key + "' takes quoted expressions");
      out.push_back(v.text);
    }
    return out;
  }

  std::vector<std::string> words(const Entry& e) const {
    std::vector<std::string> out;
    for (const auto& v : e.values) {
      if (v.quoted) where_.fail(e.line, "'" + e.key + "' takes bare names");
      out.push_back(v.text);
    }
    return out;
  }

  double number(const Entry& e, const Item& v) const {
    double x = 0.0;
    const char* first = v.text.data();
    const char* last = first + v.text.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (v.quoted || ec != std::errc() || ptr != last)
      where_.fail(e.line, "'" + e.key + "': '" + v.text + "' is not a number");
    return x;
  }

  double number(const Entry& e) const {
    if (e.values.size() != 1) where_.fail(e.line, "'" + e.key + "' takes one number");
    return number(e, e.values[0]);
  }

  std::uint64_t count(const Entry& e) const {
    std::uint64_t x = 0;
    const std::string& t = e.values[0].text;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (e.values.size() != 1 || e.values[0].quoted || ec != std::errc() || ptr != t.data() + t.size())
      where_.fail(e.line, "'" + e.key + "' takes a non-negative integer");
    return x;
  }

  Box box(const Entry& e) const {
    if (e.values.size() != 2) where_.fail(e.line, "'" + e.key + "' takes two numbers: low, high");
    const Box b{number(e, e.values[0]), number(e, e.values[1])};
    if (!(b.low <= b.high)) where_.fail(e.line, "'" + e.key + "': low exceeds high");
    return b;
  }

  [[noreturn]] void fail(const Entry& e, const std::string& message) const { where_.fail(e.line, message); }
  [[noreturn]] void fail(const std::string& message) const { where_.fail(sec_.line, message); }

  const Section& section() const { return sec_; }

 private:
  const Section& sec_;
  const Located& where_;
  std::set<std::string> used_;
};

struct Chart {
  const Manifold* manifold = nullptr;
  std::vector<Box> boxes;
};

enum class FieldKind { plain, split, statik };

struct FieldDef {
  FieldKind kind = FieldKind::plain;
  std::string on;
  VectorFieldSpec plain;
  SplitField split;
  StaticField statik;
};

struct StaticDef {
  StaticSpacetime spacetime;
  std::vector<Box> spatial;
};

/// Everything the planned checks refer to; kept alive by the Scenario.
struct State {
  std::map<std::string, Manifold> manifolds;
  std::map<std::string, WarpedProduct> warped;
  std::map<std::string, StaticDef> statics;
  std::map<std::string, Chart> charts;
  std::map<std::string, FieldDef> fields;
};

const std::vector<std::string> kKinds = {
    "torsion",        "compatibility", "killing",          "two_killing",  "parallel",
    "geodesic",       "ricci_nonpositive", "curvature_identity", "sectional_sign", "connection",
    "dxz_inner",      "lie",           "lie2",             "trace",        "parallel_theorem",
    "static_two_killing", "time_block", "time_block_general", "converse",  "ode",
    "static_line",
};

class Builder {
 public:
  Builder(const Located& where, std::shared_ptr<State> state) : where_(where), st_(std::move(state)) {}

  void add(const Section& sec, std::vector<PlannedCheck>& checks) {
    if (taken_.count(sec.name) && sec.type != "check")
      where_.fail(sec.line, "name '" + sec.name + "' is already defined");
    if (sec.type != "check") taken_.insert(sec.name);
    Keys k(sec, where_);
    try {
      if (sec.type == "manifold")
        manifold(k);
      else if (sec.type == "warped")
        warped(k);
      else if (sec.type == "static")
        statik(k);
      else if (sec.type == "field")
        field(k);
      else if (sec.type == "split")
        split(k);
      else if (sec.type == "static_field")
        static_field(k);
      else if (sec.type == "check")
        checks.push_back(check(k));
      else
        where_.fail(sec.line, "unknown section type '" + sec.type + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      where_.fail(sec.line, "[" + sec.type + " " + sec.name + "]: " + e.what());
    }
    k.finish();
  }

 private:
  Expr expr(Keys& k, const Entry& e, const std::string& text, std::shared_ptr<const CoordNames> coords) {
    try {
      return parse(text, std::move(coords));
    } catch (const ParseError& err) {
      k.fail(e, "'" + e.key + "': " + err.what());
    }
  }

  std::vector<Expr> exprs(Keys& k, const Entry& e, std::shared_ptr<const CoordNames> coords, Index dim) {
    const auto texts = k.quoted_list(e);
    if (static_cast<Index>(texts.size()) != dim)
      k.fail(e, "'" + e.key + "' needs " + std::to_string(dim) + " components, got " + std::to_string(texts.size()));
    std::vector<Expr> out;
    for (const auto& t : texts) out.push_back(expr(k, e, t, coords));
    return out;
  }

  const Chart& chart(Keys& k, const Entry& e) {
    const std::string name = k.word(e);
    const auto it = st_->charts.find(name);
    if (it == st_->charts.end()) k.fail(e, "unknown manifold '" + name + "'");
    return it->second;
  }

  const Manifold& base_manifold(Keys& k, const Entry& e) {
    const std::string name = k.word(e);
    const auto it = st_->manifolds.find(name);
    if (it == st_->manifolds.end()) k.fail(e, "unknown manifold '" + name + "'");
    return it->second;
  }

  const WarpedProduct& warped_of(Keys& k, const Entry& e) {
    const std::string name = k.word(e);
    if (const auto it = st_->warped.find(name); it != st_->warped.end()) return it->second;
    if (const auto it = st_->statics.find(name); it != st_->statics.end()) return it->second.spacetime.warped();
    k.fail(e, "unknown warped product '" + name + "'");
  }

  const StaticDef& static_of(Keys& k, const Entry& e) {
    const std::string name = k.word(e);
    const auto it = st_->statics.find(name);
    if (it == st_->statics.end()) k.fail(e, "unknown static spacetime '" + name + "'");
    return it->second;
  }

  const FieldDef& field_of(Keys& k, const Entry& e) {
    const std::string name = k.word(e);
    const auto it = st_->fields.find(name);
    if (it == st_->fields.end()) k.fail(e, "unknown field '" + name + "'");
    return it->second;
  }

  std::vector<Box> boxes_for(Keys& k, const CoordNames& coords) {
    std::vector<Box> boxes(coords.size());
    std::vector<bool> given(coords.size(), false);
    for (const Entry* e : k.prefixed("box.")) {
      const std::string c = e->key.substr(4);
      const auto it = std::find(coords.begin(), coords.end(), c);
      if (it == coords.end()) k.fail(*e, "box for unknown coordinate '" + c + "'");
      const auto i = static_cast<std::size_t>(it - coords.begin());
      boxes[i] = k.box(*e);
      given[i] = true;
    }
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (!given[i]) k.fail("missing box." + coords[i]);
    return boxes;
  }

  void manifold(Keys& k) {
    const Entry& ce = k.require("coords");
    const CoordNames coords = k.words(ce);
    std::set<std::string> unique(coords.begin(), coords.end());
    if (unique.size() != coords.size()) k.fail(ce, "repeated coordinate name");
    const std::size_t n = coords.size();
    std::vector<std::vector<std::string>> table(n, std::vector<std::string>(n));
    std::vector<std::vector<int>> lines(n, std::vector<int>(n, 0));
    const auto index = [&](const Entry& e, const std::string& c) {
      const auto it = std::find(coords.begin(), coords.end(), c);
      if (it == coords.end()) k.fail(e, "'" + e.key + "': unknown coordinate '" + c + "'");
      return static_cast<std::size_t>(it - coords.begin());
    };
    if (const Entry* d = k.find("diag")) {
      const auto texts = k.quoted_list(*d);
      if (texts.size() != n) k.fail(*d, "'diag' needs " + std::to_string(n) + " entries");
      for (std::size_t i = 0; i < n; ++i) table[i][i] = texts[i];
    }
    for (const Entry* e : k.prefixed("metric.")) {
      const std::string rest = e->key.substr(7);
      const auto dot = rest.find('.');
      if (dot == std::string::npos) k.fail(*e, "metric keys are metric.<coord>.<coord>");
      std::size_t i = index(*e, rest.substr(0, dot));
      std::size_t j = index(*e, rest.substr(dot + 1));
      if (i > j && table[j][i].empty()) std::swap(i, j);
      if (!table[i][j].empty()) k.fail(*e, "metric entry given twice");
      table[i][j] = k.quoted(*e);
      lines[i][j] = e->line;
    }
    Manifold m;
    try {
      m = Manifold::parse(k.section().name, coords, table);
    } catch (const ParseError& err) {
      k.fail(std::string("metric: ") + err.what());
    }
    for (const Entry* e : k.all("positive")) {
      const std::string text = k.quoted(*e);
      m = m.with_constraint(expr(k, *e, text, m.coords_ptr()), text + " > 0");
    }
    auto boxes = boxes_for(k, coords);
    const auto [it, ok] = st_->manifolds.emplace(k.section().name, std::move(m));
    st_->charts[k.section().name] = Chart{&it->second, std::move(boxes)};
  }

  void warped(Keys& k) {
    const Manifold& base = base_manifold(k, k.require("base"));
    const Manifold& fiber = base_manifold(k, k.require("fiber"));
    const Entry& we = k.require("warping");
    const Expr f = expr(k, we, k.quoted(we), base.coords_ptr());
    int sign = 1;
    if (const Entry* se = k.find("sign")) {
      const double s = k.number(*se);
      if (s != 1.0 && s != -1.0) k.fail(*se, "'sign' must be +1 or -1");
      sign = static_cast<int>(s);
    }
    const auto [it, ok] = st_->warped.emplace(k.section().name, WarpedProduct(base, fiber, f, sign));
    std::vector<Box> boxes = st_->charts.at(base.name()).boxes;
    const auto& fb = st_->charts.at(fiber.name()).boxes;
    boxes.insert(boxes.end(), fb.begin(), fb.end());
    st_->charts[k.section().name] = Chart{&it->second.product(), std::move(boxes)};
  }

  void statik(Keys& k) {
    const Manifold& space = base_manifold(k, k.require("space"));
    const Entry& we = k.require("warping");
    const Expr f = expr(k, we, k.quoted(we), space.coords_ptr());
    TimeInterval interval;
    if (const Entry* te = k.find("time")) interval.coord = k.word(*te);
    const Entry& ie = k.require("interval");
    const Box b = k.box(ie);
    if (!(b.low < b.high)) k.fail(ie, "'interval' must be nonempty");
    interval.low = b.low;
    interval.high = b.high;
    const std::vector<Box>& spatial = st_->charts.at(space.name()).boxes;
    SampleSpec spec;
    spec.boxes = spatial;
    const auto [it, ok] =
        st_->statics.emplace(k.section().name, StaticDef{build_static(space, f, interval, spec), spatial});
    std::vector<Box> boxes = spatial;
    boxes.push_back(b);
    st_->charts[k.section().name] = Chart{&it->second.spacetime.product(), std::move(boxes)};
  }

  void field(Keys& k) {
    const Entry& oe = k.require("on");
    const Chart& c = chart(k, oe);
    FieldDef d;
    d.on = k.word(oe);
    const Manifold& m = *c.manifold;
    d.plain = VectorFieldSpec(m.coords_ptr(), exprs(k, k.require("components"), m.coords_ptr(), m.dim()));
    st_->fields[k.section().name] = std::move(d);
  }

  void split(Keys& k) {
    const Entry& oe = k.require("on");
    const WarpedProduct& w = warped_of(k, oe);
    FieldDef d;
    d.kind = FieldKind::split;
    d.on = k.word(oe);
    const auto part = [&](const char* key, const Manifold& m) {
      if (const Entry* e = k.find(key)) return VectorFieldSpec(m.coords_ptr(), exprs(k, *e, m.coords_ptr(), m.dim()));
      return VectorFieldSpec::zero(m.coords_ptr());
    };
    d.split = split_field(w, part("base", w.base()), part("fiber", w.fiber()));
    st_->fields[k.section().name] = std::move(d);
  }

  void static_field(Keys& k) {
    const Entry& oe = k.require("on");
    const StaticDef& s = static_of(k, oe);
    FieldDef d;
    d.kind = FieldKind::statik;
    d.on = k.word(oe);
    const Manifold& time = s.spacetime.time();
    const Entry& ue = k.require("u");
    d.statik.u = expr(k, ue, k.quoted(ue), time.coords_ptr());
    const Manifold& space = s.spacetime.space();
    if (const Entry* e = k.find("spatial"))
      d.statik.spatial = VectorFieldSpec(space.coords_ptr(), exprs(k, *e, space.coords_ptr(), space.dim()));
    else
      d.statik.spatial = VectorFieldSpec::zero(space.coords_ptr());
    st_->fields[k.section().name] = std::move(d);
  }

  /// A field as a vector field on a full chart.
  std::pair<const Chart*, VectorFieldSpec> plain_field(Keys& k, const Entry& e) {
    const FieldDef& d = field_of(k, e);
    const Chart* c = &st_->charts.at(d.on);
    switch (d.kind) {
      case FieldKind::plain:
        return {c, d.plain};
      case FieldKind::split: {
        const auto wit = st_->warped.find(d.on);
        const WarpedProduct& w =
            wit != st_->warped.end() ? wit->second : st_->statics.at(d.on).spacetime.warped();
        return {c, lift(w, d.split)};
      }
      case FieldKind::statik:
        return {c, lift(st_->statics.at(d.on).spacetime, d.statik)};
    }
    return {c, d.plain};
  }

  SplitField split_of(Keys& k, const Entry& e, const std::string& on) {
    const FieldDef& d = field_of(k, e);
    if (d.kind == FieldKind::split && d.on == on) return d.split;
    if (d.kind == FieldKind::statik && d.on == on)
      return split_static(st_->statics.at(on).spacetime, d.statik);
    k.fail(e, "field '" + k.word(e) + "' is not a split field on '" + on + "'");
  }

  StaticField static_field_of(Keys& k, const Entry& e, const StaticDef** def) {
    const FieldDef& d = field_of(k, e);
    if (d.kind != FieldKind::statik) k.fail(e, "field '" + k.word(e) + "' is not a static_field");
    *def = &st_->statics.at(d.on);
    return d.statik;
  }

  /// Split fields named by `key`, or every coordinate field when absent.
  std::vector<SplitField> directions(Keys& k, const char* key, const WarpedProduct& w, const std::string& on) {
    std::vector<SplitField> out;
    if (const Entry* e = k.find(key)) {
      for (const auto& name : k.words(*e)) {
        Entry one = *e;
        one.values = {Item{name, false}};
        out.push_back(split_of(k, one, on));
      }
      return out;
    }
    for (Index i = 0; i < w.product().dim(); ++i) out.push_back(coordinate_split(w, i));
    return out;
  }

  /// Chart boxes with box.<coord> overrides from the check section.
  std::vector<Box> override_boxes(Keys& k, const CoordNames& coords, std::vector<Box> boxes) {
    for (const Entry* e : k.prefixed("box.")) {
      const std::string c = e->key.substr(4);
      const auto it = std::find(coords.begin(), coords.end(), c);
      if (it == coords.end()) k.fail(*e, "box for coordinate '" + c + "' that this check does not sample");
      boxes[static_cast<std::size_t>(it - coords.begin())] = k.box(*e);
    }
    return boxes;
  }

  template <class E>
  E form_of(Keys& k, const std::vector<std::pair<std::string, E>>& names, E fallback) {
    const Entry* e = k.find("form");
    if (!e) return fallback;
    const std::string w = k.word(*e);
    for (const auto& [n, v] : names)
      if (n == w) return v;
    k.fail(*e, "unknown form '" + w + "'");
  }

  int integer_key(Keys& k, const char* key, int low, int high) {
    const Entry& e = k.require(key);
    const double v = k.number(e);
    if (v != static_cast<int>(v) || v < low || v > high)
      k.fail(e, std::string("'") + key + "' must be an integer in " + std::to_string(low) + ".." +
                    std::to_string(high));
    return static_cast<int>(v);
  }

  PlannedCheck check(Keys& k) {
    PlannedCheck pc;
    pc.name = k.section().name;
    pc.line = k.section().line;
    const Entry& ke = k.require("kind");
    pc.kind = k.word(ke);
    if (std::find(kKinds.begin(), kKinds.end(), pc.kind) == kKinds.end())
      k.fail(ke, "unknown check kind '" + pc.kind + "'");
    if (const Entry* e = k.find("samples")) pc.file.samples = k.count(*e);
    if (const Entry* e = k.find("seed")) pc.file.seed = k.count(*e);
    if (const Entry* e = k.find("atol")) pc.file.tol.atol = k.number(*e);
    if (const Entry* e = k.find("rtol")) pc.file.tol.rtol = k.number(*e);
    pc.run = runner(k, pc.kind);
    const std::string name = pc.name;
    pc.run = [name, inner = std::move(pc.run)](const Settings& s) {
      CheckResult r = inner(s);
      r.name = name;
      return r;
    };
    return pc;
  }

  using Run = std::function<CheckResult(const Settings&)>;

  static SampleSpec spec(const Settings& s, std::vector<Box> boxes) {
    SampleSpec out;
    out.count = s.samples;
    out.seed = s.seed;
    out.boxes = std::move(boxes);
    return out;
  }

  Run runner(Keys& k, const std::string& kind) {
    auto st = st_;
    if (kind == "torsion" || kind == "compatibility") {
      const Chart& c = chart(k, k.require("on"));
      std::vector<VectorFieldSpec> extra;
      if (const Entry* e = k.find("fields"))
        for (const auto& name : k.words(*e)) {
          Entry one = *e;
          one.values = {Item{name, false}};
          auto [fc, v] = plain_field(k, one);
          if (fc->manifold != c.manifold) k.fail(*e, "field '" + name + "' is on another chart");
          extra.push_back(std::move(v));
        }
      const Manifold* m = c.manifold;
      auto boxes = override_boxes(k, m->coords(), c.boxes);
      const bool torsion = kind == "torsion";
      return [st, m, extra, boxes, torsion](const Settings& s) {
        return torsion ? torsion_defect(*m, extra, spec(s, boxes), s.tol)
                       : compatibility_defect(*m, extra, spec(s, boxes), s.tol);
      };
    }
    if (kind == "killing" || kind == "two_killing" || kind == "parallel" || kind == "geodesic" ||
        kind == "ricci_nonpositive" || kind == "curvature_identity" || kind == "sectional_sign") {
      auto [c, v] = plain_field(k, k.require("field"));
      const Manifold* m = c->manifold;
      auto boxes = override_boxes(k, m->coords(), c->boxes);
      using Fn = CheckResult (*)(const Manifold&, const VectorFieldSpec&, const SampleSpec&, const Tolerance&);
      const std::map<std::string, Fn> fns = {
          {"killing", &killing_defect},
          {"two_killing", &two_killing_defect},
          {"parallel", &parallel_defect},
          {"geodesic", &geodesic_defect},
          {"ricci_nonpositive", &ricci_nonpositive},
          {"curvature_identity", &curvature_identity_defect},
          {"sectional_sign", &sectional_sign_check},
      };
      const Fn fn = fns.at(kind);
      return [st, m, v, boxes, fn](const Settings& s) { return fn(*m, v, spec(s, boxes), s.tol); };
    }
    if (kind == "connection" || kind == "dxz_inner" || kind == "lie" || kind == "lie2" || kind == "trace" ||
        kind == "parallel_theorem")
      return warped_runner(k, kind);
    if (kind == "static_two_killing" || kind == "time_block" || kind == "time_block_general" ||
        kind == "converse") {
      const StaticDef* def = nullptr;
      const StaticField field = static_field_of(k, k.require("field"), &def);
      const StaticSpacetime* sp = &def->spacetime;
      auto boxes = override_boxes(k, sp->space().coords(), def->spatial);
      if (kind == "static_two_killing") {
        const int condition = integer_key(k, "condition", 1, 2);
        return [st, sp, field, boxes, condition](const Settings& s) {
          return check_static_2killing(*sp, field, spec(s, boxes), condition, s.tol);
        };
      }
      if (kind == "time_block")
        return [st, sp, field, boxes](const Settings& s) {
          return time_block_residual(*sp, field, spec(s, boxes), s.tol);
        };
      if (kind == "time_block_general") {
        const TimeBlockForm form = form_of<TimeBlockForm>(
            k, {{"general", TimeBlockForm::general}, {"expanded", TimeBlockForm::expanded}}, TimeBlockForm::general);
        return [st, sp, field, boxes, form](const Settings& s) {
          return time_block_general(*sp, field, spec(s, boxes), s.tol, form);
        };
      }
      return [st, sp, field, boxes](const Settings& s) {
        return converse_decompose(*sp, field, spec(s, boxes), s.tol);
      };
    }
    if (kind == "ode") {
      std::string var = "t";
      if (const Entry* e = k.find("coord")) var = k.word(*e);
      auto coords = std::make_shared<const CoordNames>(CoordNames{var});
      const Entry& ue = k.require("u");
      const Expr u = expr(k, ue, k.quoted(ue), coords);
      auto boxes = boxes_for(k, *coords);
      return [u, boxes](const Settings& s) { return ode_2killing_residual(u, spec(s, boxes), s.tol); };
    }
    // static_line
    auto tx = std::make_shared<const CoordNames>(CoordNames{"t", "x"});
    auto xs = std::make_shared<const CoordNames>(CoordNames{"x"});
    auto ts = std::make_shared<const CoordNames>(CoordNames{"t"});
    const Entry& fe = k.require("f");
    const Entry& ue = k.require("u");
    const Entry& ve = k.require("v");
    const Expr f = expr(k, fe, k.quoted(fe), xs);
    const Expr u = expr(k, ue, k.quoted(ue), ts);
    const Expr v = expr(k, ve, k.quoted(ve), xs);
    auto boxes = boxes_for(k, *tx);
    return [f, u, v, boxes](const Settings& s) { return static_line_check(f, u, v, spec(s, boxes), s.tol); };
  }

  Run warped_runner(Keys& k, const std::string& kind) {
    auto st = st_;
    const Entry& oe = k.require("on");
    const std::string on = k.word(oe);
    const WarpedProduct* w = &warped_of(k, oe);
    const CoordNames& coords = w->product().coords();
    auto boxes = override_boxes(k, coords, st_->charts.at(on).boxes);

    if (kind == "connection") {
      auto xs = directions(k, "x", *w, on);
      auto ys = directions(k, "y", *w, on);
      return [st, w, xs, ys, boxes](const Settings& s) {
        const Manifold& m = w->product();
        return sweep("connection", sample_points(spec(s, boxes), m), m.coords(), s.tol, [&](const Point& p) {
          const LocalGeometry geo(m, p);
          Sample out;
          for (const auto& x : xs)
            for (const auto& y : ys) {
              const VectorAt closed = connection_closed_form(*w, x, y, p);
              const Eigen::VectorXd intrinsic = geo.covariant(geo.sample(lift(*w, x)).value, geo.sample(lift(*w, y)));
              out.residual = std::max(out.residual, max_abs(closed.value - intrinsic));
              out.scale = std::max({out.scale, closed.scale, max_abs(intrinsic)});
            }
          return out;
        });
      };
    }

    const SplitField zeta = split_of(k, k.require("field"), on);
    if (kind == "parallel_theorem") {
      const int variant = integer_key(k, "variant", 1, 3);
      return [st, w, zeta, boxes, variant](const Settings& s) {
        return check_parallel_theorem(*w, zeta, spec(s, boxes), variant, s.tol);
      };
    }
    if (kind == "trace") {
      const TraceForm form = form_of<TraceForm>(
          k, {{"with_divergence", TraceForm::with_divergence}, {"without_divergence", TraceForm::without_divergence}},
          TraceForm::with_divergence);
      return [st, w, zeta, boxes, form](const Settings& s) {
        const Manifold& m = w->product();
        return sweep("trace", sample_points(spec(s, boxes), m), m.coords(), s.tol, [&](const Point& p) {
          const Residual r = trace_closed_form(*w, zeta, p, form);
          return Sample{r.abs, r.scale};
        });
      };
    }
    auto xs = directions(k, "x", *w, on);
    if (kind == "dxz_inner")
      return [st, w, zeta, xs, boxes](const Settings& s) {
        const Manifold& m = w->product();
        return sweep("dxz-inner", sample_points(spec(s, boxes), m), m.coords(), s.tol, [&](const Point& p) {
          Sample out;
          for (const auto& x : xs) {
            const Residual r = dxz_inner_closed_form(*w, zeta, x, p);
            out.residual = std::max(out.residual, r.abs);
            out.scale = std::max(out.scale, r.scale);
          }
          return out;
        });
      };
    auto ys = directions(k, "y", *w, on);
    const Lie2Form form =
        kind == "lie2" ? form_of<Lie2Form>(k,
                                           {{"second_derivative", Lie2Form::second_derivative},
                                            {"duplicated_square", Lie2Form::duplicated_square}},
                                           Lie2Form::second_derivative)
                       : Lie2Form::second_derivative;
    const bool second = kind == "lie2";
    return [st, w, zeta, xs, ys, boxes, form, second](const Settings& s) {
      const Manifold& m = w->product();
      return sweep(second ? "lie2" : "lie", sample_points(spec(s, boxes), m), m.coords(), s.tol,
                   [&](const Point& p) {
                     Sample out;
                     for (const auto& x : xs)
                       for (const auto& y : ys) {
                         const Residual r = second ? lie2_closed_form(*w, zeta, x, y, p, form)
                                                   : lie_closed_form(*w, zeta, x, y, p);
                         out.residual = std::max(out.residual, r.abs);
                         out.scale = std::max(out.scale, r.scale);
                       }
                     return out;
                   });
    };
  }

  const Located& where_;
  std::shared_ptr<State> st_;
  std::set<std::string> taken_;
};

}  // namespace

Settings PlannedCheck::resolve(const RunOptions& options) const {
  Settings s = file;
  if (options.seed) s.seed = *options.seed;
  if (options.samples) s.samples = *options.samples;
  if (options.atol) s.tol.atol = *options.atol;
  if (options.rtol) s.tol.rtol = *options.rtol;
  return s;
}

ScenarioInfo describe(std::string_view text) {
  ScenarioInfo info;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() != '#') break;
    const std::string body = trim(std::string_view(s).substr(1));
    const auto colon = body.find(':');
    if (colon == std::string::npos) continue;
    const std::string key = trim(std::string_view(body).substr(0, colon));
    const std::string value = trim(std::string_view(body).substr(colon + 1));
    if (key == "name") info.name = value;
    if (key == "summary") info.summary = value;
    if (key == "anchor") info.anchor = value;
  }
  return info;
}

Scenario Scenario::parse(std::string_view text, const std::string& origin) {
  const Located where(origin);
  const auto sections = read_sections(text, where);
  auto state = std::make_shared<State>();
  Builder builder(where, state);
  Scenario out;
  out.origin_ = origin;
  out.info_ = describe(text);
  std::set<std::string> check_names;
  for (const auto& sec : sections) {
    if (sec.type == "check" && !check_names.insert(sec.name).second)
      where.fail(sec.line, "check '" + sec.name + "' is defined twice");
    builder.add(sec, out.checks_);
  }
  if (out.checks_.empty()) throw ConfigError(origin + ": scenario has no [check] sections");
  if (out.info_.name.empty()) {
    const auto slash = origin.find_last_of('/');
    out.info_.name = origin.substr(slash == std::string::npos ? 0 : slash + 1);
  }
  out.state_ = std::move(state);
  return out;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open scenario file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path);
}

const std::vector<std::string>& check_kinds() { return kKinds; }

}  // namespace warpcheck
