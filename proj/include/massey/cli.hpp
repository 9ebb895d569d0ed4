#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "massey/dgalg.hpp"
#include "massey/engine.hpp"
#include "massey/errors.hpp"

namespace massey::cli {

using Json = nlohmann::ordered_json;

enum class Grading { cohomological, homological };

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUndefinedMassey = 2, kUsage = 3 };

/// Malformed or inconsistent document; the message carries the JSON path.
class SchemaError : public UsageError {
 public:
  SchemaError(const std::string& path, const std::string& what) : UsageError(path + ": " + what) {}
};

/// Tuples on which a relation is checked under --scope declared.  Either an
/// explicit list or the full cartesian power of a name list.
struct ScopeSpec {
  std::vector<std::string> cartesian;
  std::vector<std::vector<std::string>> tuples;

  friend bool operator==(const ScopeSpec&, const ScopeSpec&) = default;
};

struct Query {
  std::string name;
  std::string relation;
  std::vector<HVector> inputs;  // cocycles in the complex
  std::optional<std::vector<HVector>> subspace;
  std::optional<std::uint64_t> seed;
  std::optional<Choices> choices;
};

bool operator==(const Query& a, const Query& b);

struct Document {
  Grading grading = Grading::cohomological;
  std::optional<std::string> construct;  // directive name, when the algebra is built
  Json construct_params = Json::object();
  DgAlgebra algebra;
  std::map<std::string, ScopeSpec> scopes;
  std::vector<Query> queries;
};

bool operator==(const Document& a, const Document& b);

Document parse_document(std::string_view text);
Json to_json(const Document& doc);
/// Pretty-printed JSON with a trailing newline.
std::string serialize_document(const Document& doc);

/// Explicit tuples followed by the cartesian power, in lexicographic order.
std::vector<Tuple> resolve_scope(const GradedBasis& basis, const ScopeSpec& spec, std::size_t arity);

enum class Scope { declared, full };

struct RunOptions {
  Scope scope = Scope::declared;
  bool verbose = false;
  std::optional<std::uint64_t> seed;
};

struct Report {
  Json body;
  int exit_code = kOk;
};

Report cmd_validate(const Document& doc, const RunOptions& options);
Report cmd_homology(const Document& doc, const RunOptions& options);
Report cmd_massey(const Document& doc, const RunOptions& options);

/// Canned documents as (file name, contents), in a fixed order.
std::vector<std::pair<std::string, std::string>> example_documents();

/// Human-readable rendering of a report produced by one of the commands.
std::string render_text(const Report& report);

}  // namespace massey::cli
