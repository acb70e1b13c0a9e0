#include "mate/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mate::io {

namespace {

using json = nlohmann::json;

struct Token {
  std::string_view text;
  int column;  // 1-based
};

struct Line {
  int number;  // 1-based
  std::vector<Token> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r' ||
                                raw[i] == '\v' || raw[i] == '\f')) {
        ++i;
      }
      if (i >= raw.size()) break;
      const std::size_t start = i;
      while (i < raw.size() && !(raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r' ||
                                 raw[i] == '\v' || raw[i] == '\f')) {
        ++i;
      }
      line.tokens.push_back(Token{raw.substr(start, i - start), static_cast<int>(start) + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool all_numeric(const Line& l) {
  return std::all_of(l.tokens.begin(), l.tokens.end(),
                     [](const Token& t) { return to_double(t.text).has_value(); });
}

bool keyword_is(const Line& l, std::string_view kw) {
  if (l.tokens.size() != 1) return false;
  const std::string_view t = l.tokens[0].text;
  if (t.size() != kw.size()) return false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(t[i])) != kw[i]) return false;
  }
  return true;
}

std::optional<long long> as_integer(double v) {
  if (v != std::floor(v) || std::fabs(v) > 1e15) return std::nullopt;
  return static_cast<long long>(v);
}

double apply_rounding(double d, DistanceRounding r) {
  switch (r) {
    case DistanceRounding::Exact: return d;
    case DistanceRounding::Truncate1: return std::floor(d * 10.0) / 10.0;
    case DistanceRounding::Round2: return std::round(d * 100.0) / 100.0;
  }
  return d;
}

}  // namespace

ParseError::ParseError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) +
                                        (column > 0 ? ", column " + std::to_string(column) : "") +
                                        ": " + what
                                  : what),
      line_(line),
      column_(column) {}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_2dp(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

// ---------------------------------------------------------------------------
// wc text format

Instance parse_wc(std::string_view text, const WcOptions& opts) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw ParseError("empty document");

  const Line& head = lines.front();
  if (head.tokens.size() != 1 || keyword_is(head, "VEHICLE") || keyword_is(head, "CUSTOMER") ||
      to_double(head.tokens[0].text)) {
    throw ParseError("malformed header: expected the instance name alone on the first line",
                     head.number, head.tokens[0].column);
  }
  const std::string name(head.tokens[0].text);

  std::size_t i = 1;
  while (i < lines.size() && !keyword_is(lines[i], "VEHICLE")) {
    if (keyword_is(lines[i], "CUSTOMER")) {
      throw ParseError("CUSTOMER section before VEHICLE section", lines[i].number, 1);
    }
    ++i;
  }
  if (i == lines.size()) throw ParseError("missing VEHICLE section");
  ++i;

  std::optional<int> fleet;
  double capacity = 0.0;
  for (; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (keyword_is(l, "CUSTOMER")) break;
    if (!all_numeric(l)) continue;
    if (fleet) throw ParseError("unexpected numeric line in VEHICLE section", l.number, 1);
    if (l.tokens.size() != 2) {
      throw ParseError("vehicle line must hold NUMBER and CAPACITY", l.number, l.tokens[0].column);
    }
    const double j = *to_double(l.tokens[0].text);
    const auto ji = as_integer(j);
    if (!ji || *ji < 0 || *ji > 1'000'000) {
      throw ParseError("vehicle NUMBER must be a nonnegative integer", l.number, l.tokens[0].column);
    }
    capacity = *to_double(l.tokens[1].text);
    if (capacity < 0.0) {
      throw ParseError("CAPACITY must be nonnegative", l.number, l.tokens[1].column);
    }
    fleet = static_cast<int>(*ji);
  }
  if (!fleet) throw ParseError("missing vehicle NUMBER/CAPACITY line");
  if (i == lines.size()) throw ParseError("missing CUSTOMER section");
  ++i;

  struct Row {
    long long id;
    double v[7];
    int line;
  };
  std::vector<Row> rows;
  bool started = false;
  for (; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (!all_numeric(l)) {
      if (!started) continue;  // column headings
      for (const Token& t : l.tokens) {
        if (!to_double(t.text)) throw ParseError("non-numeric field in customer row", l.number, t.column);
      }
    }
    started = true;
    if (l.tokens.size() != 8) {
      throw ParseError("customer row needs 8 fields, found " + std::to_string(l.tokens.size()),
                       l.number, l.tokens.back().column);
    }
    Row row{};
    row.line = l.number;
    const auto id = as_integer(*to_double(l.tokens[0].text));
    if (!id || *id < 0) throw ParseError("node id must be a nonnegative integer", l.number, l.tokens[0].column);
    row.id = *id;
    for (int k = 0; k < 7; ++k) {
      row.v[k] = *to_double(l.tokens[static_cast<std::size_t>(k) + 1].text);
    }
    const auto col = [&l](int k) { return l.tokens[static_cast<std::size_t>(k)].column; };
    if (row.v[2] < 0.0) throw ParseError("negative delivery demand", l.number, col(3));
    if (row.v[3] < 0.0) throw ParseError("negative pickup demand", l.number, col(4));
    if (row.v[6] < 0.0) throw ParseError("negative service time", l.number, col(7));
    if (row.v[4] > row.v[5]) throw ParseError("ready time exceeds due date", l.number, col(5));
    if (row.id > 0 && std::max(row.v[2], row.v[3]) > capacity) {
      throw ParseError("demand exceeds vehicle capacity", l.number, col(row.v[2] > capacity ? 3 : 4));
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError("no customer rows");

  std::vector<const Row*> by_id(rows.size(), nullptr);
  for (const Row& r : rows) {
    if (r.id >= static_cast<long long>(rows.size())) {
      if (r.id != 0 && std::none_of(rows.begin(), rows.end(), [](const Row& x) { return x.id == 0; })) {
        throw ParseError("missing depot row (id 0)");
      }
      throw ParseError("node ids must be consecutive from 0; id " + std::to_string(r.id) +
                           " is out of range",
                       r.line, 1);
    }
    const Row*& slot = by_id[static_cast<std::size_t>(r.id)];
    if (slot) throw ParseError("duplicate node id " + std::to_string(r.id), r.line, 1);
    slot = &r;
  }
  if (!by_id[0]) throw ParseError("missing depot row (id 0)");
  for (std::size_t k = 0; k < by_id.size(); ++k) {
    if (!by_id[k]) throw ParseError("missing node id " + std::to_string(k));
  }
  const Row& depot = *by_id[0];
  if (depot.v[2] != 0.0 || depot.v[3] != 0.0 || depot.v[6] != 0.0) {
    throw ParseError("depot row must have zero demands and service time", depot.line, 1);
  }

  std::vector<Node> nodes;
  nodes.reserve(by_id.size());
  for (std::size_t k = 0; k < by_id.size(); ++k) {
    const Row& r = *by_id[k];
    Node nd;
    nd.id = static_cast<NodeId>(k);
    nd.x = r.v[0];
    nd.y = r.v[1];
    nd.delivery = r.v[2];
    nd.pickup = r.v[3];
    nd.tw_start = r.v[4];
    nd.tw_end = r.v[5];
    nd.service = r.v[6];
    nodes.push_back(nd);
  }

  try {
    Instance inst = Instance::euclidean(name, std::move(nodes), *fleet, capacity,
                                        opts.dispatch_cost, opts.unit_cost);
    if (opts.rounding == DistanceRounding::Exact) return inst;
    std::vector<double> d(inst.dist_matrix().begin(), inst.dist_matrix().end());
    for (double& x : d) x = apply_rounding(x, opts.rounding);
    std::vector<Node> ns(inst.nodes().begin(), inst.nodes().end());
    std::vector<double> t = d;
    return Instance::create(name, std::move(ns), std::move(d), std::move(t), *fleet, capacity,
                            opts.dispatch_cost, opts.unit_cost);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string write_wc(const Instance& inst) {
  std::ostringstream os;
  os << (inst.name().empty() ? "unnamed" : inst.name()) << "\n\n";
  os << "VEHICLE\nNUMBER     CAPACITY\n";
  os << "  " << inst.fleet_size() << "     " << format_number(inst.capacity()) << "\n\n";
  os << "CUSTOMER\n";
  os << "CUST NO.  XCOORD.  YCOORD.  DDEMAND  PDEMAND  READY TIME  DUE DATE  SERVICE TIME\n\n";
  for (const Node& n : inst.nodes()) {
    os << "  " << n.id << "  " << format_number(n.x.value_or(0.0)) << "  "
       << format_number(n.y.value_or(0.0)) << "  " << format_number(n.delivery) << "  "
       << format_number(n.pickup) << "  " << format_number(n.tw_start) << "  "
       << format_number(n.tw_end) << "  " << format_number(n.service) << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// canonical JSON format

namespace {

constexpr int kFormatVersion = 1;

const json& require_field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing required field '" + std::string(key) + "' in " + where);
  return *it;
}

double number_field(const json& obj, const char* key, const std::string& where) {
  const json& v = require_field(obj, key, where);
  if (!v.is_number()) throw ParseError("field '" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

std::vector<double> read_matrix(const json& m, std::size_t n, const char* key) {
  if (!m.is_array() || m.size() != n) {
    throw ParseError(std::string("matrix '") + key + "' must have " + std::to_string(n) + " rows");
  }
  std::vector<double> out;
  out.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = m[i];
    if (!row.is_array() || row.size() != n) {
      throw ParseError(std::string("matrix '") + key + "' row " + std::to_string(i) +
                       " must have " + std::to_string(n) + " entries");
    }
    for (const json& v : row) {
      if (!v.is_number()) throw ParseError(std::string("matrix '") + key + "' holds a non-number");
      out.push_back(v.get<double>());
    }
  }
  return out;
}

std::pair<int, int> line_col(std::string_view text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Instance parse_canonical(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("invalid JSON", line, col);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("document root must be an object");
    const json& ver = require_field(doc, "format_version", "document");
    if (!ver.is_number_integer() || ver.get<long long>() != kFormatVersion) {
      throw ParseError("unsupported format_version (expected " + std::to_string(kFormatVersion) + ")");
    }
    std::string name;
    if (auto it = doc.find("name"); it != doc.end()) {
      if (!it->is_string()) throw ParseError("field 'name' must be a string");
      name = it->get<std::string>();
    }
    const json& fleet = require_field(doc, "fleet_size", "document");
    if (!fleet.is_number_integer() || fleet.get<long long>() < 0 || fleet.get<long long>() > 1'000'000) {
      throw ParseError("field 'fleet_size' must be a nonnegative integer");
    }
    const double capacity = number_field(doc, "capacity", "document");
    const double u1 = number_field(doc, "dispatch_cost", "document");
    const double u2 = number_field(doc, "unit_cost", "document");

    const json& jnodes = require_field(doc, "nodes", "document");
    if (!jnodes.is_array() || jnodes.empty()) throw ParseError("field 'nodes' must be a non-empty array");
    const std::size_t n = jnodes.size();
    std::vector<std::optional<Node>> slots(n);
    bool all_coords = true;
    for (std::size_t k = 0; k < n; ++k) {
      const json& jn = jnodes[k];
      const std::string where = "nodes[" + std::to_string(k) + "]";
      if (!jn.is_object()) throw ParseError(where + " must be an object");
      const json& jid = require_field(jn, "id", where);
      if (!jid.is_number_integer() || jid.get<long long>() < 0 ||
          jid.get<long long>() >= static_cast<long long>(n)) {
        throw ParseError(where + ": id must be an integer in [0, " + std::to_string(n - 1) + "]");
      }
      const auto id = static_cast<std::size_t>(jid.get<long long>());
      if (slots[id]) throw ParseError(where + ": duplicate id " + std::to_string(id));
      Node nd;
      nd.id = static_cast<NodeId>(id);
      const bool hx = jn.contains("x");
      const bool hy = jn.contains("y");
      if (hx != hy) throw ParseError(where + ": coordinates need both 'x' and 'y'");
      if (hx) {
        nd.x = number_field(jn, "x", where);
        nd.y = number_field(jn, "y", where);
      } else {
        all_coords = false;
      }
      nd.delivery = number_field(jn, "delivery", where);
      nd.pickup = number_field(jn, "pickup", where);
      nd.tw_start = number_field(jn, "tw_start", where);
      nd.tw_end = number_field(jn, "tw_end", where);
      nd.service = number_field(jn, "service", where);
      slots[id] = nd;
    }
    std::vector<Node> nodes;
    nodes.reserve(n);
    for (auto& s : slots) nodes.push_back(*s);

    std::vector<double> dist;
    if (auto it = doc.find("distance"); it != doc.end()) {
      dist = read_matrix(*it, n, "distance");
    } else {
      if (!all_coords) throw ParseError("either a 'distance' matrix or coordinates on every node are required");
      const Instance tmp =
          Instance::euclidean(name, nodes, static_cast<int>(fleet.get<long long>()), capacity, u1, u2);
      dist.assign(tmp.dist_matrix().begin(), tmp.dist_matrix().end());
    }
    std::vector<double> time;
    if (auto it = doc.find("time"); it != doc.end()) {
      time = read_matrix(*it, n, "time");
    } else {
      time = dist;
    }
    return Instance::create(std::move(name), std::move(nodes), std::move(dist), std::move(time),
                            static_cast<int>(fleet.get<long long>()), capacity, u1, u2);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

std::string write_canonical(const Instance& inst) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["name"] = inst.name();
  doc["fleet_size"] = inst.fleet_size();
  doc["capacity"] = inst.capacity();
  doc["dispatch_cost"] = inst.dispatch_cost();
  doc["unit_cost"] = inst.unit_cost();
  json nodes = json::array();
  for (const Node& n : inst.nodes()) {
    json jn;
    jn["id"] = n.id;
    if (n.x && n.y) {
      jn["x"] = *n.x;
      jn["y"] = *n.y;
    }
    jn["delivery"] = n.delivery;
    jn["pickup"] = n.pickup;
    jn["tw_start"] = n.tw_start;
    jn["tw_end"] = n.tw_end;
    jn["service"] = n.service;
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  const auto n = static_cast<std::size_t>(inst.num_nodes());
  auto matrix = [n](std::span<const double> flat) {
    json m = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      m.push_back(std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(i * n),
                                      flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
    }
    return m;
  };
  doc["distance"] = matrix(inst.dist_matrix());
  doc["time"] = matrix(inst.time_matrix());
  return doc.dump(1) + "\n";
}

// ---------------------------------------------------------------------------
// files

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Instance load_instance(const std::filesystem::path& path, InstanceFormat format,
                       const WcOptions& opts) {
  const std::string text = read_file(path);
  if (format == InstanceFormat::Wc) return parse_wc(text, opts);
  return parse_canonical(text);
}

// ---------------------------------------------------------------------------
// solution files

Solution SolutionFile::to_solution() const {
  Solution s;
  for (const auto& r : routes) {
    Route route{kDepot};
    route.insert(route.end(), r.begin(), r.end());
    route.push_back(kDepot);
    s.routes.push_back(std::move(route));
  }
  return s;
}

std::string write_solution(const Instance& inst, const Solution& s, const SolutionMeta& meta) {
  std::ostringstream os;
  os << "# vrpspdtw solution\n";
  os << "instance " << (inst.name().empty() ? "unnamed" : inst.name()) << "\n";
  os << "u1 " << format_number(inst.dispatch_cost()) << "\n";
  os << "u2 " << format_number(inst.unit_cost()) << "\n";
  for (const Route& r : s.routes) {
    os << "route";
    for (std::size_t p = 1; p + 1 < r.size(); ++p) os << ' ' << r[p];
    os << "\n";
  }
  os << "nv " << s.num_routes() << "\n";
  os << "td " << format_2dp(total_distance(inst, s)) << "\n";
  os << "tc " << format_2dp(total_cost(inst, s)) << "\n";
  if (meta.seed) os << "seed " << *meta.seed << "\n";
  if (!meta.version.empty()) os << "version " << meta.version << "\n";
  return os.str();
}

SolutionFile read_solution(std::string_view text, int num_customers) {
  SolutionFile f;
  bool have_instance = false, have_u1 = false, have_u2 = false, have_nv = false, have_td = false,
       have_tc = false;
  std::set<NodeId> seen;

  for (const Line& l : tokenize(text)) {
    const std::string_view key = l.tokens[0].text;
    if (key.front() == '#') continue;
    auto one_value = [&l, key]() -> const Token& {
      if (l.tokens.size() != 2) {
        throw ParseError("'" + std::string(key) + "' takes exactly one value", l.number, l.tokens[0].column);
      }
      return l.tokens[1];
    };
    auto number = [&](const Token& t) {
      const auto v = to_double(t.text);
      if (!v) throw ParseError("expected a number", l.number, t.column);
      return *v;
    };
    auto duplicate = [&](bool& flag) {
      if (flag) throw ParseError("repeated '" + std::string(key) + "' line", l.number, 1);
      flag = true;
    };

    if (key == "instance") {
      duplicate(have_instance);
      f.instance = std::string(one_value().text);
    } else if (key == "u1") {
      duplicate(have_u1);
      f.dispatch_cost = number(one_value());
    } else if (key == "u2") {
      duplicate(have_u2);
      f.unit_cost = number(one_value());
    } else if (key == "route") {
      if (l.tokens.size() < 2) throw ParseError("route without customers", l.number, 1);
      std::vector<NodeId> r;
      for (std::size_t k = 1; k < l.tokens.size(); ++k) {
        const Token& t = l.tokens[k];
        const auto v = to_double(t.text);
        const auto iv = v ? as_integer(*v) : std::nullopt;
        if (!iv) throw ParseError("customer id must be an integer", l.number, t.column);
        if (*iv < 1 || *iv > 100'000'000) {
          throw ParseError("unknown customer " + std::string(t.text), l.number, t.column);
        }
        if (num_customers >= 0 && *iv > num_customers) {
          throw ParseError("unknown customer " + std::string(t.text) + " (instance has " +
                               std::to_string(num_customers) + ")",
                           l.number, t.column);
        }
        const auto id = static_cast<NodeId>(*iv);
        if (!seen.insert(id).second) {
          throw ParseError("duplicate customer " + std::to_string(id), l.number, t.column);
        }
        r.push_back(id);
      }
      f.routes.push_back(std::move(r));
    } else if (key == "nv") {
      duplicate(have_nv);
      const Token& t = one_value();
      const auto iv = as_integer(number(t));
      if (!iv || *iv < 0) throw ParseError("nv must be a nonnegative integer", l.number, t.column);
      f.nv = static_cast<int>(*iv);
    } else if (key == "td") {
      duplicate(have_td);
      f.td = number(one_value());
    } else if (key == "tc") {
      duplicate(have_tc);
      f.tc = number(one_value());
    } else if (key == "seed") {
      const Token& t = one_value();
      std::uint64_t seed = 0;
      const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), seed);
      if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size()) {
        throw ParseError("seed must be an unsigned integer", l.number, t.column);
      }
      f.seed = seed;
    } else if (key == "version") {
      f.version = std::string(one_value().text);
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", l.number, l.tokens[0].column);
    }
  }
  if (!have_instance || !have_u1 || !have_u2 || !have_nv || !have_td || !have_tc) {
    throw ParseError("solution file lacks one of: instance, u1, u2, nv, td, tc");
  }
  return f;
}

}  // namespace mate::io
