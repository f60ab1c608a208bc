#include "avarc/congraph/linear_form.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace avarc::congraph {
namespace {

struct ParsedConcept {
  std::size_t name_pos = 0;
  std::string theme_name;
  bool referent_given = false;
  std::optional<std::string> referent;
  std::optional<std::string> label;
};

struct ParsedArc {
  std::size_t name_pos = 0;
  std::string relation_name;
  std::size_t source = 0;  // indices into the concept list
  std::size_t target = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { }

  void parse() {
    statement();
    skip_ws();
    while (peek() == ';') {
      ++pos_;
      statement();
      skip_ws();
    }
    if (pos_ != text_.size())
      fail("expected ';' or end of input");
  }

  [[noreturn]] void fail(const std::string &what, Errc errc = Errc::cg_syntax,
                         std::size_t at = std::string_view::npos) const {
    const std::size_t where = at == std::string_view::npos ? pos_ : at;
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < where && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(errc,
                what + " at position " + std::to_string(where) + " (line " +
                    std::to_string(line) + ", column " +
                    std::to_string(column) + ")",
                Json{{"position", where}, {"line", line}, {"column", column}});
  }

  std::vector<ParsedConcept> concepts;
  std::vector<ParsedArc> arcs;

 private:
  void statement() {
    std::size_t previous = concept_ref();
    skip_ws();
    while (peek() == '-') {
      ++pos_;
      expect('(');
      skip_ws();
      std::size_t name_pos = pos_;
      std::string relation = name();
      expect(')');
      expect('-');
      expect('>');
      std::size_t next = concept_ref();
      arcs.push_back({name_pos, std::move(relation), previous, next});
      previous = next;
      skip_ws();
    }
  }

  std::size_t concept_ref() {
    expect('[');
    ParsedConcept c;
    skip_ws();
    c.name_pos = pos_;
    c.theme_name = name();
    skip_ws();
    if (peek() == ':') {
      ++pos_;
      skip_ws();
      c.referent_given = true;
      if (peek() == '*') {
        ++pos_;
      } else if (peek() == '"') {
        std::size_t quote_pos = pos_;
        c.referent = quoted();
        if (c.referent->empty())
          fail("individual referent must not be empty", Errc::cg_syntax,
               quote_pos);
      } else {
        fail("expected '*' or a quoted referent");
      }
      skip_ws();
    }
    if (peek() == '#') {
      ++pos_;
      skip_ws();
      c.label = node_id();
      skip_ws();
    }
    expect(']');
    concepts.push_back(std::move(c));
    return concepts.size() - 1;
  }

  std::string name() {
    if (!is_alpha(peek()))
      fail("expected a name starting with a letter");
    std::size_t start = pos_;
    while (pos_ < text_.size() && (is_alpha(text_[pos_]) || is_digit(text_[pos_]) ||
                                   text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string node_id() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (is_alpha(text_[pos_]) || is_digit(text_[pos_]) ||
                                   text_[pos_] == '_'))
      ++pos_;
    if (start == pos_)
      fail("expected a node id after '#'");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string quoted() {
    std::size_t open = pos_;
    ++pos_;
    std::string out;
    while (pos_ < text_.size()) {
      char c = text_[pos_++];
      if (c == '"')
        return out;
      if (c == '\\') {
        if (pos_ >= text_.size())
          break;
        char e = text_[pos_++];
        if (e != '"' && e != '\\')
          fail("unsupported escape sequence", Errc::cg_syntax, pos_ - 2);
        out += e;
      } else {
        out += c;
      }
    }
    fail("unterminated string", Errc::cg_syntax, open);
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      ++pos_;
  }

  static bool is_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

const std::string &theme_name(const ontology::ThemeOntology &o,
                              const ThemeId &id) {
  const auto *t = o.theme(id);
  if (t == nullptr)
    throw Error(Errc::cg_unknown_theme, "graph uses unknown theme " + id.value);
  return t->name;
}

}  // namespace

ConceptualGraph parse_graph(std::string_view text,
                            const ontology::ThemeOntology &o) {
  Parser p(text);
  p.parse();

  // Resolve concepts to nodes; coreferent "#id" mentions collapse.
  std::vector<std::string> concept_label(p.concepts.size());
  std::map<std::string, std::size_t> declared;  // label -> first concept index
  std::set<std::string> used_labels;
  for (const auto &c : p.concepts)
    if (c.label)
      used_labels.insert(*c.label);

  ConceptualGraph g;
  g.ontology = o.id;
  std::size_t next_auto = 1;
  for (std::size_t i = 0; i < p.concepts.size(); ++i) {
    const auto &c = p.concepts[i];
    const auto *theme = o.theme_named(c.theme_name);
    if (theme == nullptr)
      p.fail("unknown theme '" + c.theme_name + "'", Errc::cg_unknown_theme,
             c.name_pos);

    if (c.label) {
      auto it = declared.find(*c.label);
      if (it != declared.end()) {
        const auto &first = p.concepts[it->second];
        if (first.theme_name != c.theme_name)
          p.fail("node #" + *c.label + " was declared as [" +
                     first.theme_name + "]",
                 Errc::cg_syntax, c.name_pos);
        const auto *node = g.node(*c.label);
        if (c.referent_given && c.referent != node->referent)
          p.fail("node #" + *c.label + " repeats with a different referent",
                 Errc::cg_syntax, c.name_pos);
        concept_label[i] = *c.label;
        continue;
      }
      declared.emplace(*c.label, i);
      concept_label[i] = *c.label;
    } else {
      std::string label;
      do {
        label = "n" + std::to_string(next_auto++);
      } while (used_labels.contains(label));
      used_labels.insert(label);
      concept_label[i] = label;
    }
    g.nodes.push_back({concept_label[i], theme->id, c.referent});
  }

  for (const auto &a : p.arcs) {
    const auto *rel = o.relation_named(a.relation_name);
    if (rel == nullptr)
      p.fail("unknown relation '" + a.relation_name + "'",
             Errc::cg_unknown_relation, a.name_pos);
    const auto &src = concept_label[a.source];
    const auto &dst = concept_label[a.target];
    const auto *src_node = g.node(src);
    const auto *dst_node = g.node(dst);
    if (!ontology::subsumes(o, rel->domain, src_node->theme))
      p.fail("[" + theme_name(o, src_node->theme) + "] is outside the domain of '" +
                 rel->name + "'",
             Errc::cg_signature, a.name_pos);
    if (!ontology::subsumes(o, rel->range, dst_node->theme))
      p.fail("[" + theme_name(o, dst_node->theme) + "] is outside the range of '" +
                 rel->name + "'",
             Errc::cg_signature, a.name_pos);
    g.arcs.push_back({rel->id, src, dst});
  }
  normalize(g);
  return g;
}

std::string print_graph(const ConceptualGraph &g,
                        const ontology::ThemeOntology &o) {
  auto nodes = g.nodes;
  std::sort(nodes.begin(), nodes.end(),
            [](const ConceptNode &a, const ConceptNode &b) {
              return a.label < b.label;
            });

  struct NamedArc {
    std::string relation;
    std::string source;
    std::string target;
    auto operator<=>(const NamedArc &) const = default;
  };
  std::vector<NamedArc> arcs;
  for (const auto &a : g.arcs) {
    const auto *rel = o.relation(a.relation);
    if (rel == nullptr)
      throw Error(Errc::cg_unknown_relation,
                  "graph uses unknown relation " + a.relation.value);
    arcs.push_back({rel->name, a.source, a.target});
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  auto short_concept = [&](const std::string &label) {
    const auto *n = g.node(label);
    if (n == nullptr)
      throw Error(Errc::validation, "arc refers to missing node '" + label + "'");
    return "[" + theme_name(o, n->theme) + " #" + label + "]";
  };

  std::string out;
  for (const auto &n : nodes) {
    if (!out.empty())
      out += "; ";
    out += "[" + theme_name(o, n.theme);
    if (n.referent)
      out += ": " + quote(*n.referent);
    out += " #" + n.label + "]";
  }
  for (const auto &a : arcs) {
    out += "; ";
    out += short_concept(a.source) + "-(" + a.relation + ")->" +
           short_concept(a.target);
  }
  return out;
}

}  // namespace avarc::congraph
