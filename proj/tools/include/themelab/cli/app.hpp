#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "themelab/classify.hpp"
#include "themelab/cli/toml_lite.hpp"

namespace themelab::cli {

enum class Command { Invariants, Bernstein, Canonical, Isom, Invariance, Scan, Verify };
enum class Format { Text, Json };

std::optional<Command> parse_command(std::string_view name);
std::string command_name(Command c);

struct JobSpec {
  Command command = Command::Invariants;
  std::vector<std::string> inputs;  // two for isom, one otherwise
  std::optional<int> prec;
  Format format = Format::Text;
  std::vector<std::string> grid;  // "z=-2..2 step 1/2"
  int threads = 1;
};

inline constexpr int kMinPrecision = 8;

/// Throws ParseError when the job is malformed.
void validate(const JobSpec& spec);

/// One input document: a theme (lambda1, p, S) or a Xi generator (expr),
/// either of them optionally with a [grid] table.
struct Document {
  enum class Kind { Theme, Xi };
  Kind kind = Kind::Theme;
  FundamentalInvariants invariants;  // theme
  std::vector<std::string> relations;  // theme, may be empty for `canonical`
  std::string expr;                  // xi
  int log_bound = 0;                 // xi
  int rank_bound = 4;
  std::optional<int> prec;
  ParameterMap params;
  std::map<std::string, std::vector<Rational>> grid;
  TomlValue source;
};

Document load_document(const TomlValue& v);
Document load_document_file(const std::string& path);

nlohmann::json to_json(const TomlValue& v);
TomlValue from_json(const nlohmann::json& j);

/// Adds or replaces a grid axis from "z=-2..2 step 1/2".
void apply_grid_option(Document& doc, std::string_view option);

ThemePresentation presentation_of(const Document& doc, int prec);

/// Outcome of a job: the JSON report and the exit code.
/// Exit codes: 0 ok, 1 parse/validation error, 2 Inconclusive present,
/// 3 precision exhausted.
struct Outcome {
  nlohmann::json report;
  int exit_code = 0;
};

/// Runs a command on already loaded documents.
Outcome execute(Command command, const std::vector<Document>& docs, int prec, int threads = 1);

/// Independent check of an isomorphism witness: eps_j triangular with unit
/// diagonal and satisfying the relations of `target` inside `e`.
bool check_isomorphism_witness(const ThemePresentation& e, const ThemePresentation& target,
                               const std::vector<ThemeElement>& eps, std::string* why = nullptr);
/// x in F_{k-1} \ F_{k-2} and P.x = 0.
bool check_invariance_witness(const ThemePresentation& e, const ThemeElement& x,
                              std::string* why = nullptr);

std::string render_text(const nlohmann::json& report);

/// Runs the job and writes the report; errors go to `err`.
int run(const JobSpec& spec, std::ostream& out, std::ostream& err);

/// argv front end used by the theme-lab executable.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace themelab::cli
