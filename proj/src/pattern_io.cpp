#include "codedxbar/pattern_io.hpp"

#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include <json.hpp>

#include "codedxbar/errors.hpp"

namespace codedxbar {

namespace {

using nlohmann::json;

// Input iterator that reports how many characters the lexer has consumed.
class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator() = default;
  CountingIterator(const char* p, std::size_t* consumed) : p_(p), consumed_(consumed) {}
  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    ++p_;
    if (consumed_) ++*consumed_;
    return *this;
  }
  CountingIterator operator++(int) {
    auto old = *this;
    ++*this;
    return old;
  }
  friend bool operator==(const CountingIterator& a, const CountingIterator& b) { return a.p_ == b.p_; }
  friend bool operator!=(const CountingIterator& a, const CountingIterator& b) { return a.p_ != b.p_; }

 private:
  const char* p_ = nullptr;
  std::size_t* consumed_ = nullptr;
};

struct Position {
  std::size_t line;
  std::size_t column;
};

Position locate(std::string_view text, std::size_t offset) {
  Position pos{1, 1};
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

// Builds the DOM while remembering where each value ended and the literal
// text of every floating-point number, keyed by JSON pointer.
class Recorder {
 public:
  using number_integer_t = json::number_integer_t;
  using number_unsigned_t = json::number_unsigned_t;
  using number_float_t = json::number_float_t;
  using string_t = json::string_t;
  using binary_t = json::binary_t;

  Recorder(json& root, const std::size_t* consumed) : dom_(root, false), consumed_(consumed) {}

  bool null() { return value(), dom_.null(); }
  bool boolean(bool v) { return value(), dom_.boolean(v); }
  bool number_integer(number_integer_t v) { return value(), dom_.number_integer(v); }
  bool number_unsigned(number_unsigned_t v) { return value(), dom_.number_unsigned(v); }
  bool number_float(number_float_t v, const string_t& s) {
    value();
    literals[path()] = s;
    return dom_.number_float(v, s);
  }
  bool string(string_t& v) { return value(), dom_.string(v); }
  bool binary(binary_t& v) { return value(), dom_.binary(v); }
  bool start_object(std::size_t n) {
    value();
    stack_.push_back({true, "", 0});
    return dom_.start_object(n);
  }
  bool key(string_t& k) {
    stack_.back().key = k;
    return dom_.key(k);
  }
  bool end_object() {
    stack_.pop_back();
    return dom_.end_object();
  }
  bool start_array(std::size_t n) {
    value();
    stack_.push_back({false, "", 0});
    return dom_.start_array(n);
  }
  bool end_array() {
    stack_.pop_back();
    return dom_.end_array();
  }
  bool parse_error(std::size_t position, const std::string& token, const nlohmann::detail::exception& ex) {
    error_offset = position;
    error_message = ex.what();
    (void)token;
    return false;
  }

  std::map<std::string, std::size_t> offsets;
  std::map<std::string, std::string> literals;
  std::size_t error_offset = 0;
  std::string error_message;

 private:
  struct Frame {
    bool object;
    std::string key;
    std::size_t index;
  };

  std::string path() const {
    std::string p;
    for (const Frame& f : stack_) p += "/" + (f.object ? f.key : std::to_string(f.index - 1));
    return p;
  }
  // array frames count elements seen so far; the current one is index - 1
  void value() {
    if (!stack_.empty() && !stack_.back().object) ++stack_.back().index;
    offsets[path()] = *consumed_;
  }

  nlohmann::detail::json_sax_dom_parser<json> dom_;
  const std::size_t* consumed_;
  std::vector<Frame> stack_;
};

// Offsets are taken after the lexer finished a token, sometimes one
// character of lookahead later; walk back to where the token starts.
std::size_t token_start(std::string_view text, std::size_t offset) {
  if (offset == 0 || offset > text.size()) return 0;
  std::size_t i = offset - 1;
  if (text[i] == '{' || text[i] == '[') return i;
  while (i > 0 && std::string_view(" \t\r\n,]}").find(text[i]) != std::string_view::npos) --i;
  if (text[i] == '"') {
    while (i > 0 && !(text[i - 1] == '"' && (i < 2 || text[i - 2] != '\\'))) --i;
    return i > 0 ? i - 1 : 0;
  }
  while (i > 0 && std::string_view(" \t\r\n,[{:").find(text[i - 1]) == std::string_view::npos) --i;
  return i;
}

struct Document {
  std::string_view text;
  json root;
  std::map<std::string, std::size_t> offsets;
  std::map<std::string, std::string> literals;

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    std::string p = pointer;
    auto it = offsets.find(p);
    while (it == offsets.end() && !p.empty()) {
      p = p.substr(0, p.rfind('/'));
      it = offsets.find(p);
    }
    const Position pos = locate(text, it == offsets.end() ? 0 : token_start(text, it->second));
    throw ParseError(message + " (" + (pointer.empty() ? "/" : pointer) + ")", pos.line, pos.column);
  }

  const json& at(const std::string& pointer) const { return root.at(json::json_pointer(pointer)); }
};

Document parse_document(std::string_view text) {
  Document doc{text, json(), {}, {}};
  std::size_t consumed = 0;
  Recorder recorder(doc.root, &consumed);
  CountingIterator first(text.data(), &consumed);
  CountingIterator last(text.data() + text.size(), nullptr);
  const bool ok = json::sax_parse(first, last, &recorder);
  if (!ok) {
    const Position pos = locate(text, recorder.error_offset > 0 ? recorder.error_offset - 1 : 0);
    throw ParseError("invalid JSON: " + recorder.error_message, pos.line, pos.column);
  }
  doc.offsets = std::move(recorder.offsets);
  doc.literals = std::move(recorder.literals);
  return doc;
}

Rational read_rate(const Document& doc, const std::string& pointer) {
  const json& v = doc.at(pointer);
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_float()) return parse_rational(doc.literals.at(pointer));
    if (v.is_number_integer()) return Rational(v.get<long>());
  } catch (const ParseError& e) {
    doc.fail(pointer, e.what());
  }
  doc.fail(pointer, "rate must be a number or a \"p/q\" string");
}

int read_int(const Document& doc, const std::string& pointer, const char* what) {
  const json& v = doc.at(pointer);
  if (!v.is_number_integer()) doc.fail(pointer, std::string(what) + " must be an integer");
  const auto value = v.get<long long>();
  if (value < 0 || value > 1'000'000) doc.fail(pointer, std::string(what) + " out of range");
  return static_cast<int>(value);
}

}  // namespace

PatternSpec parse_pattern(std::string_view text) {
  const Document doc = parse_document(text);
  if (!doc.root.is_object()) doc.fail("", "pattern must be a JSON object");
  for (const char* key : {"inputs", "outputs", "flows"})
    if (!doc.root.contains(key)) doc.fail("", std::string("missing key \"") + key + "\"");
  const int m = read_int(doc, "/inputs", "inputs");
  const int n = read_int(doc, "/outputs", "outputs");
  if (!doc.at("/flows").is_array()) doc.fail("/flows", "flows must be an array");

  std::vector<Flow> flows;
  RateVector rates;
  std::size_t with_rate = 0;
  const std::size_t count = doc.at("/flows").size();
  for (std::size_t i = 0; i < count; ++i) {
    const std::string base = "/flows/" + std::to_string(i);
    const json& f = doc.at(base);
    if (!f.is_object()) doc.fail(base, "flow must be an object");
    if (!f.contains("input")) doc.fail(base, "flow is missing \"input\"");
    if (!f.contains("fanout")) doc.fail(base, "flow is missing \"fanout\"");
    Flow flow;
    flow.input = read_int(doc, base + "/input", "input");
    if (flow.input >= m) doc.fail(base + "/input", "input out of range");
    if (!f["fanout"].is_array()) doc.fail(base + "/fanout", "fanout must be an array");
    for (std::size_t j = 0; j < f["fanout"].size(); ++j) {
      const std::string at = base + "/fanout/" + std::to_string(j);
      flow.fanout.push_back(read_int(doc, at, "output"));
      if (flow.fanout.back() >= n) doc.fail(at, "output out of range");
    }
    flows.push_back(std::move(flow));
    if (f.contains("rate")) {
      rates.push_back(read_rate(doc, base + "/rate"));
      ++with_rate;
    }
  }
  if (with_rate != 0 && with_rate != count)
    doc.fail("/flows", "either every flow or no flow may carry a rate");

  PatternSpec spec;
  try {
    spec.pattern = TrafficPattern(m, n, std::move(flows));
  } catch (const Error& e) {
    doc.fail("/flows", e.what());
  }
  if (with_rate == count && count > 0) {
    for (std::size_t i = 0; i < rates.size(); ++i)
      if (rates[i] < 0) doc.fail("/flows/" + std::to_string(i) + "/rate", "negative rate");
    spec.rates = std::move(rates);
  }
  return spec;
}

PatternSpec load_pattern(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read pattern file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_pattern(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

RateVector parse_rate_list(std::string_view text) {
  std::size_t start = text.find_first_not_of(" \t\r\n");
  if (start != std::string_view::npos && text[start] == '[') {
    const Document doc = parse_document(text);
    if (!doc.root.is_array()) doc.fail("", "rates must be an array");
    RateVector rates;
    for (std::size_t i = 0; i < doc.root.size(); ++i) rates.push_back(read_rate(doc, "/" + std::to_string(i)));
    return rates;
  }
  RateVector rates;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view item =
        text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    try {
      rates.push_back(parse_rational(item));
    } catch (const ParseError& e) {
      throw ParseError(std::string(e.what()), 1, pos + 1);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  for (const Rational& r : rates)
    if (r < 0) throw ParseError("negative rate " + to_string(r));
  return rates;
}

}  // namespace codedxbar
