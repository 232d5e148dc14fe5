#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nilspace/abelian.hpp"
#include "nilspace/groups.hpp"
#include "nilspace/report.hpp"

namespace nilspace {

struct SourceLocation {
  int line = 0;
  int column = 0;
};

/// what() is "<line>:<column>: <message>".
class WorkspaceParseError : public std::runtime_error {
 public:
  WorkspaceParseError(SourceLocation loc, const std::string& message);
  SourceLocation location() const { return loc_; }
  const std::string& message() const { return message_; }

 private:
  SourceLocation loc_;
  std::string message_;
};

struct Argument {
  enum class Kind { Number, Name, String, Levels, Option };

  Kind kind = Kind::Number;
  SourceLocation loc;
  Int number = 0;
  std::string text;                      // name, string contents or option key
  std::vector<std::vector<Int>> levels;  // [a, b; c]
  std::vector<Argument> value;           // option value (one entry)
};

struct Call {
  std::string func;
  SourceLocation loc;
  std::vector<Argument> args;
};

std::string to_string(const Call& call);

enum class StatementKind { Group, Filtration, Space, Cocycle, Assert, Compute, SetBudget, Write };

struct Statement {
  StatementKind kind = StatementKind::Group;
  SourceLocation loc;
  std::string name;      // defined name; cocycle name for write
  std::string on;        // group of a filtration
  Call call;
  std::uint64_t budget = 0;
  std::string path;      // write target as written
  std::string contents;  // cocycle file text read at parse time
  std::string base;      // base space of a cocycle
};

/// Parsed and resolved workspace. Groups and filtrations are built while
/// parsing so table and filtration errors carry a source location; spaces
/// and cocycles are built by run_workspace.
struct Workspace {
  std::filesystem::path base_dir;
  std::vector<Statement> statements;
  std::map<std::string, FiniteGroup> groups;
  std::map<std::string, Filtration> filtrations;

  std::size_t count(StatementKind kind) const;
};

Workspace parse_workspace(const std::string& text, const std::filesystem::path& base_dir = ".");
/// Relative paths inside the file resolve against its directory.
Workspace load_workspace(const std::filesystem::path& path);

struct RunOptions {
  std::uint64_t budget = 0;  // 0 selects kDefaultNodeBudget
};

/// Executes statements in order. Every definition and command yields one
/// section; `set budget` replaces the per-command node budget from there on.
Report run_workspace(const Workspace& ws, const RunOptions& options = {});

/// Budget precedence: default < NILSPACE_BUDGET < command line.
std::uint64_t resolve_budget(std::optional<std::uint64_t> command_line, const char* env_value);

/// Invariant-form group of an abelian FiniteGroup with its element map.
AbelianIdentification identify_abelian(const FiniteGroup& g);

}  // namespace nilspace
