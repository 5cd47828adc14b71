#include "proxekit/edit_dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

namespace proxekit {

bool operator==(const EditCommand& a, const EditCommand& b) {
  return a.verb == b.verb && a.ids == b.ids && a.args == b.args;
}

ScriptError::ScriptError(const std::string& message, int line, int col)
    : std::runtime_error(message + " at line " + std::to_string(line) + ", col " +
                         std::to_string(col)),
      line(line),
      col(col) {}

namespace {

struct Token {
  std::string text;
  int col = 0;  // 1-based
};

std::vector<Token> lex_line(const std::string& line) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    size_t begin = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    tokens.push_back({line.substr(begin, i - begin), static_cast<int>(begin) + 1});
  }
  return tokens;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, int line)
      : tokens_(std::move(tokens)), line_(line) {}

  bool done() const { return next_ >= tokens_.size(); }
  const Token& peek() const { return tokens_[next_]; }
  int end_col() const {
    return tokens_.empty() ? 1 : tokens_.back().col + static_cast<int>(tokens_.back().text.size());
  }

  Token take(const char* what) {
    if (done()) throw ScriptError(std::string("expected ") + what, line_, end_col());
    return tokens_[next_++];
  }

  int take_id() {
    const Token tok = take("id (#n)");
    if (tok.text.size() < 2 || tok.text[0] != '#' ||
        !std::all_of(tok.text.begin() + 1, tok.text.end(),
                     [](unsigned char c) { return std::isdigit(c); })) {
      throw ScriptError("expected id (#n), got '" + tok.text + "'", line_, tok.col);
    }
    return static_cast<int>(std::strtol(tok.text.c_str() + 1, nullptr, 10));
  }

  double take_real() {
    const Token tok = take("number");
    const char* begin = tok.text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end != begin + tok.text.size() || !std::isfinite(value)) {
      throw ScriptError("expected number, got '" + tok.text + "'", line_, tok.col);
    }
    return value;
  }

  void take_keyword(const char* keyword) {
    const Token tok = take(("'" + std::string(keyword) + "'").c_str());
    if (lower(tok.text) != keyword) {
      throw ScriptError("expected '" + std::string(keyword) + "', got '" + tok.text + "'",
                        line_, tok.col);
    }
  }

  std::vector<int> take_selector() {
    std::vector<int> ids;
    ids.push_back(take_id());
    while (!done() && !peek().text.empty() && peek().text[0] == '#') ids.push_back(take_id());
    return ids;
  }

  std::vector<double> take_reals(int count) {
    std::vector<double> values;
    values.reserve(count);
    for (int i = 0; i < count; ++i) values.push_back(take_real());
    return values;
  }

  void expect_end() {
    if (!done()) {
      throw ScriptError("unexpected token '" + peek().text + "'", line_, peek().col);
    }
  }

 private:
  std::vector<Token> tokens_;
  size_t next_ = 0;
  int line_;
};

std::string fmt_real(double v) {
  char buf[40];
  auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

}  // namespace

EditScript parse_script(const std::string& text) {
  EditScript script;
  script.source = text;
  std::set<int> introduced;  // ids created by add/clone in this script
  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::vector<Token> tokens = lex_line(raw);
    if (tokens.empty() || tokens.front().text[0] == '#') continue;  // blank or comment line

    LineParser parser(std::move(tokens), line_no);
    const Token verb_tok = parser.take("verb");
    const std::string verb = lower(verb_tok.text);
    EditCommand cmd;
    cmd.line = line_no;
    cmd.col = verb_tok.col;

    if (verb == "scale" || verb == "translate" || verb == "rotate") {
      cmd.verb = verb == "scale" ? EditVerb::Scale
                 : verb == "translate" ? EditVerb::Translate
                                       : EditVerb::Rotate;
      cmd.ids = parser.take_selector();
      parser.take_keyword("by");
      cmd.args = parser.take_reals(3);
    } else if (verb == "shape") {
      cmd.verb = EditVerb::Shape;
      cmd.ids = parser.take_selector();
      parser.take_keyword("by");
      cmd.args = parser.take_reals(2);
    } else if (verb == "delete") {
      cmd.verb = EditVerb::Delete;
      cmd.ids = parser.take_selector();
    } else if (verb == "add") {
      cmd.verb = EditVerb::Add;
      const Token id_tok = parser.done() ? verb_tok : parser.peek();
      cmd.ids = {parser.take_id()};
      if (!introduced.insert(cmd.ids[0]).second) {
        throw ScriptError("duplicate add id " + std::to_string(cmd.ids[0]), line_no,
                          id_tok.col);
      }
      parser.take_keyword("scale");
      auto scale = parser.take_reals(3);
      parser.take_keyword("shape");
      auto shape = parser.take_reals(2);
      parser.take_keyword("at");
      auto at = parser.take_reals(3);
      parser.take_keyword("rot");
      auto rot = parser.take_reals(3);
      cmd.args = scale;
      cmd.args.insert(cmd.args.end(), shape.begin(), shape.end());
      cmd.args.insert(cmd.args.end(), at.begin(), at.end());
      cmd.args.insert(cmd.args.end(), rot.begin(), rot.end());
    } else if (verb == "clone") {
      cmd.verb = EditVerb::Clone;
      const int src = parser.take_id();
      parser.take_keyword("as");
      const Token id_tok = parser.peek();
      const int fresh = parser.take_id();
      if (!introduced.insert(fresh).second) {
        throw ScriptError("duplicate add id " + std::to_string(fresh), line_no, id_tok.col);
      }
      cmd.ids = {src, fresh};
      parser.take_keyword("offset");
      cmd.args = parser.take_reals(3);
    } else {
      throw ScriptError("unknown verb '" + verb_tok.text + "'", line_no, verb_tok.col);
    }
    parser.expect_end();
    script.commands.push_back(std::move(cmd));
  }
  return script;
}

std::string print_script(const EditScript& script) {
  std::ostringstream out;
  for (const EditCommand& cmd : script.commands) {
    switch (cmd.verb) {
      case EditVerb::Scale:
      case EditVerb::Translate:
      case EditVerb::Rotate:
      case EditVerb::Shape: {
        out << (cmd.verb == EditVerb::Scale       ? "scale"
                : cmd.verb == EditVerb::Translate ? "translate"
                : cmd.verb == EditVerb::Rotate    ? "rotate"
                                                  : "shape");
        for (int id : cmd.ids) out << " #" << id;
        out << " by";
        for (double v : cmd.args) out << ' ' << fmt_real(v);
        break;
      }
      case EditVerb::Delete:
        out << "delete";
        for (int id : cmd.ids) out << " #" << id;
        break;
      case EditVerb::Add:
        out << "add #" << cmd.ids[0];
        out << " scale " << fmt_real(cmd.args[0]) << ' ' << fmt_real(cmd.args[1]) << ' '
            << fmt_real(cmd.args[2]);
        out << " shape " << fmt_real(cmd.args[3]) << ' ' << fmt_real(cmd.args[4]);
        out << " at " << fmt_real(cmd.args[5]) << ' ' << fmt_real(cmd.args[6]) << ' '
            << fmt_real(cmd.args[7]);
        out << " rot " << fmt_real(cmd.args[8]) << ' ' << fmt_real(cmd.args[9]) << ' '
            << fmt_real(cmd.args[10]);
        break;
      case EditVerb::Clone:
        out << "clone #" << cmd.ids[0] << " as #" << cmd.ids[1];
        out << " offset " << fmt_real(cmd.args[0]) << ' ' << fmt_real(cmd.args[1]) << ' '
            << fmt_real(cmd.args[2]);
        break;
    }
    out << '\n';
  }
  return out.str();
}

namespace {

Primitive* find_mutable(Proxy& proxy, int id) {
  for (Primitive& p : proxy.primitives) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

Primitive& require_primitive(Proxy& proxy, int id, const EditCommand& cmd) {
  Primitive* p = find_mutable(proxy, id);
  if (!p) throw ScriptError("unknown id " + std::to_string(id), cmd.line, cmd.col);
  return *p;
}

void require_fresh(const Proxy& proxy, int id, const EditCommand& cmd) {
  if (find_primitive(proxy, id)) {
    throw ScriptError("id " + std::to_string(id) + " already exists", cmd.line, cmd.col);
  }
}

}  // namespace

Proxy apply_script(const EditScript& script, const Proxy& proxy) {
  Proxy result = proxy;
  for (const EditCommand& cmd : script.commands) {
    switch (cmd.verb) {
      case EditVerb::Scale:
        for (int id : cmd.ids) {
          Primitive& p = require_primitive(result, id, cmd);
          const Vec3 scaled{p.params.scale.x * cmd.args[0], p.params.scale.y * cmd.args[1],
                            p.params.scale.z * cmd.args[2]};
          if (!(scaled.x > 0.0) || !(scaled.y > 0.0) || !(scaled.z > 0.0)) {
            throw ScriptError("resulting scale is not positive for id " + std::to_string(id),
                              cmd.line, cmd.col);
          }
          p.params.scale = scaled;
        }
        break;
      case EditVerb::Translate:
        for (int id : cmd.ids) {
          Primitive& p = require_primitive(result, id, cmd);
          p.params.translation =
              p.params.translation + Vec3{cmd.args[0], cmd.args[1], cmd.args[2]};
        }
        break;
      case EditVerb::Rotate:
        for (int id : cmd.ids) {
          Primitive& p = require_primitive(result, id, cmd);
          const Mat4 composed = rotation_from_euler({cmd.args[0], cmd.args[1], cmd.args[2]}) *
                                rotation_from_euler(p.params.rotation);
          p.params.rotation = euler_from_rotation(composed);
        }
        break;
      case EditVerb::Shape:
        for (int id : cmd.ids) {
          Primitive& p = require_primitive(result, id, cmd);
          p.params.shape1 = std::clamp(cmd.args[0], kShapeExponentMin, kShapeExponentMax);
          p.params.shape2 = std::clamp(cmd.args[1], kShapeExponentMin, kShapeExponentMax);
        }
        break;
      case EditVerb::Delete:
        for (int id : cmd.ids) {
          require_primitive(result, id, cmd);
          std::erase_if(result.primitives, [id](const Primitive& p) { return p.id == id; });
        }
        break;
      case EditVerb::Add: {
        const int id = cmd.ids[0];
        require_fresh(result, id, cmd);
        Primitive p;
        p.id = id;
        p.color = color_palette()[static_cast<size_t>(id) % color_palette().size()];
        try {
          p.params = make_superquadric({cmd.args[0], cmd.args[1], cmd.args[2]}, cmd.args[3],
                                       cmd.args[4], {cmd.args[5], cmd.args[6], cmd.args[7]},
                                       {cmd.args[8], cmd.args[9], cmd.args[10]});
        } catch (const std::invalid_argument& e) {
          throw ScriptError(e.what(), cmd.line, cmd.col);
        }
        result.primitives.push_back(p);
        break;
      }
      case EditVerb::Clone: {
        const int src = cmd.ids[0];
        const int fresh = cmd.ids[1];
        const Primitive& source = require_primitive(result, src, cmd);
        require_fresh(result, fresh, cmd);
        Primitive p = source;
        p.id = fresh;
        p.color = color_palette()[static_cast<size_t>(fresh) % color_palette().size()];
        p.params.translation =
            p.params.translation + Vec3{cmd.args[0], cmd.args[1], cmd.args[2]};
        result.primitives.push_back(p);
        break;
      }
    }
  }
  return result;
}

}  // namespace proxekit
