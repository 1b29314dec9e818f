#include "wrrnc/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace wrrnc::cli {

ConfigError::ConfigError(std::string code, int line, int column, const std::string& message)
    : Error(std::move(code),
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

const FlowSpec* ConfigDocument::find_flow(std::string_view name) const {
  for (const FlowSpec& f : flows) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

namespace {

struct Token {
  std::string_view text;
  int column;
};

struct Field {
  std::string_view value;
  int column;  // of the value
};

class LineParser {
 public:
  LineParser(int line, std::vector<Token> tokens) : line_(line), tokens_(std::move(tokens)) {}

  [[noreturn]] void fail(const std::string& code, int column, const std::string& message) const {
    throw ConfigError(code, line_, column, message);
  }

  // Splits tokens[2..] into key=value pairs restricted to `allowed`.
  void read_fields(const std::set<std::string_view>& allowed) {
    for (std::size_t i = 2; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      const auto eq = t.text.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        fail("E_SYNTAX", t.column, "expected key=value, got '" + std::string(t.text) + "'");
      }
      const std::string_view key = t.text.substr(0, eq);
      if (!allowed.contains(key)) fail("E_UNKNOWN_KEY", t.column, "unknown key '" + std::string(key) + "'");
      if (fields_.contains(key)) fail("E_DUPLICATE_KEY", t.column, "key '" + std::string(key) + "' repeated");
      fields_.emplace(key, Field{t.text.substr(eq + 1), t.column + static_cast<int>(eq) + 1});
    }
  }

  const Field& field(std::string_view key) const {
    const auto it = fields_.find(key);
    if (it == fields_.end()) fail("E_MISSING_KEY", end_column(), "missing key '" + std::string(key) + "'");
    return it->second;
  }

  std::optional<Field> optional_field(std::string_view key) const {
    const auto it = fields_.find(key);
    if (it == fields_.end()) return std::nullopt;
    return it->second;
  }

  std::string text(std::string_view key) const {
    const Field& f = field(key);
    if (f.value.empty()) fail("E_BAD_VALUE", f.column, "empty value for '" + std::string(key) + "'");
    return std::string(f.value);
  }

  long long integer(std::string_view key) const {
    const Field& f = field(key);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(f.value.data(), f.value.data() + f.value.size(), v);
    if (ec != std::errc{} || ptr != f.value.data() + f.value.size() || f.value.empty()) {
      fail("E_BAD_VALUE", f.column, "'" + std::string(key) + "' must be an integer, got '" + std::string(f.value) + "'");
    }
    return v;
  }

  int weight(std::string_view key) const {
    const long long v = integer(key);
    if (v < INT32_MIN || v > INT32_MAX) fail("E_BAD_VALUE", field(key).column, "weight out of range");
    return static_cast<int>(v);
  }

  double real(std::string_view key) const {
    const Field& f = field(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f.value.data(), f.value.data() + f.value.size(), v);
    if (ec != std::errc{} || ptr != f.value.data() + f.value.size() || f.value.empty() || !std::isfinite(v)) {
      fail("E_BAD_VALUE", f.column, "'" + std::string(key) + "' must be a number, got '" + std::string(f.value) + "'");
    }
    return v;
  }

  std::vector<PortId> path(std::string_view key) const {
    const Field& f = field(key);
    std::vector<PortId> out;
    std::size_t start = 0;
    while (start <= f.value.size()) {
      const auto comma = f.value.find(',', start);
      const std::size_t end = comma == std::string_view::npos ? f.value.size() : comma;
      const auto hop = PortId::parse(f.value.substr(start, end - start));
      if (!hop) {
        fail("E_BAD_VALUE", f.column + static_cast<int>(start),
             "path entries must be <switch>.<port>, got '" + std::string(f.value.substr(start, end - start)) + "'");
      }
      out.push_back(*hop);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  }

  int line() const noexcept { return line_; }
  const Token& token(std::size_t i) const { return tokens_[i]; }

 private:
  int end_column() const {
    const Token& last = tokens_.back();
    return last.column + static_cast<int>(last.text.size());
  }

  int line_;
  std::vector<Token> tokens_;
  std::map<std::string_view, Field, std::less<>> fields_;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

class DocumentBuilder {
 public:
  void link(LineParser& p) {
    p.read_fields({"a", "b", "capacity_bps"});
    const std::string name(p.token(1).text);
    if (!link_names_.insert(name).second) {
      p.fail("E_DUPLICATE_LINK", p.token(1).column, "link '" + name + "' declared twice");
    }
    doc_.topology.add_link(Link{name, Endpoint::parse(p.text("a")), Endpoint::parse(p.text("b")),
                                static_cast<double>(p.integer("capacity_bps"))});
  }

  void port(LineParser& p) {
    p.read_fields({"w1", "w2", "max_bg_frame_bytes"});
    const auto id = PortId::parse(p.token(1).text);
    if (!id) p.fail("E_SYNTAX", p.token(1).column, "port name must be <switch>.<int>");
    if (doc_.topology.has_port(*id)) {
      p.fail("E_DUPLICATE_PORT", p.token(1).column, "port '" + id->str() + "' declared twice");
    }
    doc_.topology.set_port(*id, PortSettings{p.weight("w1"), p.weight("w2"),
                                             bytes_to_bits(static_cast<double>(p.integer("max_bg_frame_bytes")))});
  }

  void flow(LineParser& p) {
    p.read_fields({"class", "src", "dst", "frame_bytes", "period_s", "deadline_s", "path"});
    FlowSpec f;
    f.name = std::string(p.token(1).text);
    if (doc_.find_flow(f.name)) p.fail("E_DUPLICATE_FLOW", p.token(1).column, "flow '" + f.name + "' declared twice");
    const std::string cls = p.text("class");
    f.src = p.text("src");
    f.dst = p.text("dst");
    f.path = p.path("path");
    if (cls == "control") {
      f.cls = FlowClass::control;
      const double frame = bytes_to_bits(static_cast<double>(p.integer("frame_bytes")));
      const double period = p.real("period_s");
      try {
        f.source = PeriodicSource(frame, period);
      } catch (const DomainError& e) {
        p.fail("E_BAD_VALUE", p.field("period_s").column, e.what());
      }
      f.deadline = p.real("deadline_s");
    } else if (cls == "background") {
      f.cls = FlowClass::background;
      for (const char* key : {"frame_bytes", "period_s", "deadline_s"}) {
        if (auto extra = p.optional_field(key)) {
          p.fail("E_UNKNOWN_KEY", extra->column, std::string("key '") + key + "' is not valid for background flows");
        }
      }
      f.source = SaturatingSource{};
    } else {
      p.fail("E_BAD_VALUE", p.field("class").column, "class must be control or background");
    }
    doc_.flows.push_back(std::move(f));
  }

  ConfigDocument take() { return std::move(doc_); }

 private:
  ConfigDocument doc_;
  std::set<std::string> link_names_;
};

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string integral(double v) { return std::to_string(std::llround(v)); }

}  // namespace

ConfigDocument parse_config(std::string_view text) {
  DocumentBuilder builder;
  int line_no = 0;
  bool any = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    auto tokens = tokenize(line);
    if (!tokens.empty()) {
      any = true;
      const std::string_view directive = tokens[0].text;
      const int column = tokens[0].column;
      if (directive != "link" && directive != "port" && directive != "flow") {
        throw ConfigError("E_UNKNOWN_DIRECTIVE", line_no, column, "unknown directive '" + std::string(directive) + "'");
      }
      if (tokens.size() < 2) throw ConfigError("E_SYNTAX", line_no, column, "missing name after '" + std::string(directive) + "'");
      LineParser p(line_no, std::move(tokens));
      if (directive == "link") {
        builder.link(p);
      } else if (directive == "port") {
        builder.port(p);
      } else {
        builder.flow(p);
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (!any) throw ConfigError("E_EMPTY_CONFIG", 1, 1, "configuration contains no directives");
  return builder.take();
}

ConfigDocument load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("E_IO", "cannot open configuration file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_config_text(const ConfigDocument& doc) {
  std::ostringstream out;
  for (const Link& l : doc.topology.links()) {
    out << "link " << l.name << " a=" << l.a.str() << " b=" << l.b.str() << " capacity_bps=" << integral(l.capacity)
        << '\n';
  }
  for (const auto& [id, s] : doc.topology.ports()) {
    out << "port " << id.str() << " w1=" << s.w1 << " w2=" << s.w2
        << " max_bg_frame_bytes=" << integral(s.max_bg_frame / kBitsPerByte) << '\n';
  }
  for (const FlowSpec& f : doc.flows) {
    out << "flow " << f.name << " class=" << (f.cls == FlowClass::control ? "control" : "background")
        << " src=" << f.src << " dst=" << f.dst;
    if (const PeriodicSource* p = f.periodic(); p && f.cls == FlowClass::control) {
      out << " frame_bytes=" << integral(p->frame_len() / kBitsPerByte) << " period_s=" << shortest(p->period())
          << " deadline_s=" << shortest(f.deadline.value_or(0.0));
    }
    out << " path=";
    for (std::size_t i = 0; i < f.path.size(); ++i) out << (i ? "," : "") << f.path[i].str();
    out << '\n';
  }
  return out.str();
}

}  // namespace wrrnc::cli
