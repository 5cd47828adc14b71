#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "proxekit/proxy.hpp"

namespace proxekit {

// Line-oriented primitive edit language. One command per line; a line whose
// first token starts with '#' is a comment; blank lines are ignored.
// Verbs and keywords are case-insensitive, ids are written "#<int>".
//
//   scale     #id... by <sx> <sy> <sz>     component-wise multiply
//   translate #id... by <dx> <dy> <dz>     add to translation
//   rotate    #id... by <rx> <ry> <rz>     compose Euler rotation (new o old)
//   shape     #id... by <e1> <e2>          overwrite exponents (then clamp)
//   delete    #id...
//   add #id scale <3> shape <2> at <3> rot <3>
//   clone #src as #id offset <dx> <dy> <dz>
enum class EditVerb { Scale, Translate, Rotate, Shape, Delete, Add, Clone };

struct EditCommand {
  EditVerb verb = EditVerb::Scale;
  // Selector ids. Add: {new_id}. Clone: {source_id, new_id}.
  std::vector<int> ids;
  // Scale/Translate/Rotate: 3 reals. Shape: 2. Delete: none.
  // Add: 11 reals (scale, shape, at, rot). Clone: 3 (offset).
  std::vector<double> args;
  int line = 0;
  int col = 0;
};

bool operator==(const EditCommand& a, const EditCommand& b);

struct EditScript {
  std::vector<EditCommand> commands;
  std::string source;  // original text, kept for error reporting
};

// Parse and apply errors both carry the 1-based position of the offending
// token (or command).
struct ScriptError : std::runtime_error {
  ScriptError(const std::string& message, int line, int col);
  int line;
  int col;
};

EditScript parse_script(const std::string& text);

// Canonical formatter; parse(print_script(parse(s))) == parse(s).
std::string print_script(const EditScript& script);

// Applies commands in order, fail-fast, without mutating the input proxy.
// Primitives introduced by add/clone take their color from color_palette().
Proxy apply_script(const EditScript& script, const Proxy& proxy);

}  // namespace proxekit
