#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "robnet/graph.hpp"

// Minimal GraphML reader. Only the structural subset is interpreted:
// <graph edgedefault=...>, <node id=...>, <edge source=... target=...
// [directed=...]>. Everything else (keys, data, ports, nested graphs' extras)
// is tokenized and skipped. The tokenizer tracks line numbers so malformed
// input is reported with a location.

namespace robnet {
namespace {

struct Tag {
  std::string name;
  std::map<std::string, std::string> attrs;
  bool closing = false;
  bool self_closing = false;
  int line = 0;
};

class Tokenizer {
 public:
  explicit Tokenizer(const std::string& text) : text_(text) {}

  // Advances to the next element tag; returns false at end of input.
  bool next(Tag& tag) {
    while (pos_ < text_.size()) {
      if (text_[pos_] != '<') {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
        continue;
      }
      if (starts_with("<!--")) {
        skip_until("-->", "unterminated comment");
        continue;
      }
      if (starts_with("<?")) {
        skip_until("?>", "unterminated processing instruction");
        continue;
      }
      if (starts_with("<!")) {
        skip_until(">", "unterminated declaration");
        continue;
      }
      return parse_tag(tag);
    }
    return false;
  }

  int line() const { return line_; }

 private:
  bool starts_with(const char* s) const {
    return text_.compare(pos_, std::char_traits<char>::length(s), s) == 0;
  }

  void skip_until(const std::string& end, const char* err) {
    auto at = text_.find(end, pos_);
    if (at == std::string::npos) throw ParseError(err, line_);
    for (std::size_t i = pos_; i < at; ++i)
      if (text_[i] == '\n') ++line_;
    pos_ = at + end.size();
  }

  bool parse_tag(Tag& tag) {
    tag = Tag{};
    tag.line = line_;
    ++pos_;  // consume '<'
    if (pos_ < text_.size() && text_[pos_] == '/') {
      tag.closing = true;
      ++pos_;
    }
    tag.name = read_name();
    if (tag.name.empty()) throw ParseError("expected element name after '<'", line_);
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) throw ParseError("unterminated tag", tag.line);
      if (text_[pos_] == '>') {
        ++pos_;
        return true;
      }
      if (text_[pos_] == '/') {
        ++pos_;
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != '>')
          throw ParseError("expected '>' after '/'", line_);
        ++pos_;
        tag.self_closing = true;
        return true;
      }
      std::string name = read_name();
      if (name.empty())
        throw ParseError("unexpected character in tag '" + tag.name + "'", line_);
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != '=')
        throw ParseError("attribute '" + name + "' is missing '='", line_);
      ++pos_;
      skip_space();
      tag.attrs[name] = read_quoted();
    }
  }

  std::string read_name() {
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
          c == ':' || c == '.') {
        ++pos_;
      } else {
        break;
      }
    }
    return text_.substr(start, pos_ - start);
  }

  std::string read_quoted() {
    if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\''))
      throw ParseError("attribute value must be quoted", line_);
    char quote = text_[pos_++];
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != quote) {
      char c = text_[pos_];
      if (c == '\n') ++line_;
      if (c == '&') {
        out += read_entity();
      } else {
        out += c;
        ++pos_;
      }
    }
    if (pos_ >= text_.size()) throw ParseError("unterminated attribute value", line_);
    ++pos_;  // closing quote
    return out;
  }

  char read_entity() {
    auto end = text_.find(';', pos_);
    if (end == std::string::npos || end - pos_ > 8)
      throw ParseError("malformed entity reference", line_);
    std::string name = text_.substr(pos_ + 1, end - pos_ - 1);
    pos_ = end + 1;
    if (name == "amp") return '&';
    if (name == "lt") return '<';
    if (name == "gt") return '>';
    if (name == "quot") return '"';
    if (name == "apos") return '\'';
    throw ParseError("unsupported entity '&" + name + ";'", line_);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

struct PendingEdge {
  std::string source, target;
  bool directed = false;
  int line = 0;
};

}  // namespace

Network parse_graphml(const std::string& text, const std::string& filename) {
  Tokenizer tok(text);
  Tag tag;

  bool in_graph = false, saw_graph = false, edgedefault_directed = false;
  std::vector<std::string> node_order;
  std::map<std::string, int> node_ids;
  std::vector<PendingEdge> edges;

  while (tok.next(tag)) {
    if (tag.name == "graph") {
      if (tag.closing) {
        in_graph = false;
        continue;
      }
      if (saw_graph) continue;  // only the first graph element is read
      saw_graph = true;
      in_graph = true;
      auto it = tag.attrs.find("edgedefault");
      edgedefault_directed = it != tag.attrs.end() && it->second == "directed";
      continue;
    }
    if (!in_graph || tag.closing) continue;
    if (tag.name == "node") {
      auto it = tag.attrs.find("id");
      if (it == tag.attrs.end())
        throw ParseError("node element is missing its id attribute", tag.line);
      if (node_ids.count(it->second))
        throw ParseError("duplicate node id '" + it->second + "'", tag.line);
      node_ids[it->second] = static_cast<int>(node_order.size());
      node_order.push_back(it->second);
    } else if (tag.name == "edge") {
      auto s = tag.attrs.find("source");
      auto t = tag.attrs.find("target");
      if (s == tag.attrs.end() || t == tag.attrs.end())
        throw ParseError("edge element needs source and target attributes", tag.line);
      bool directed = edgedefault_directed;
      if (auto d = tag.attrs.find("directed"); d != tag.attrs.end())
        directed = d->second == "true";
      edges.push_back({s->second, t->second, directed, tag.line});
    }
    // Other elements (key, data, ...) carry no structure we use.
  }
  if (!saw_graph) throw ParseError("no graph element found", tok.line());

  std::vector<std::pair<int, int>> arcs;
  bool any_undirected = false;
  for (const auto& e : edges) {
    auto su = node_ids.find(e.source);
    auto tv = node_ids.find(e.target);
    if (su == node_ids.end())
      throw DataError("line " + std::to_string(e.line) + ": edge references unknown node '" +
                      e.source + "'");
    if (tv == node_ids.end())
      throw DataError("line " + std::to_string(e.line) + ": edge references unknown node '" +
                      e.target + "'");
    arcs.emplace_back(su->second, tv->second);
    if (!e.directed) {
      arcs.emplace_back(tv->second, su->second);
      any_undirected = true;
    }
  }

  const int n = static_cast<int>(node_order.size());
  Network g = Network::from_arcs(n, std::move(arcs), std::move(node_order));
  g.origin = filename;
  g.undirected_source = any_undirected;
  return g;
}

}  // namespace robnet
