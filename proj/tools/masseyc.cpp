// masseyc: validate algebras, compute homology and Massey products from JSON documents.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "massey/cli.hpp"

namespace {

using namespace massey::cli;

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw massey::UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw massey::UsageError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Massey products in the homology of DG algebras over quadratic operads"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string format = "json";
  std::string scope = "declared";
  bool verbose = false;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "Document path, or - for stdin")->required();
    cmd->add_option("--output", output, "Report path (default stdout)");
    cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
    cmd->add_flag("--verbose", verbose, "Include chosen representatives and bounding chains");
  };

  auto* validate = app.add_subcommand("validate", "Run d^2, derivation, symmetry and relation checks");
  add_common(validate);
  validate->add_option("--scope", scope, "Relation check scope")->check(CLI::IsMember({"declared", "full"}));

  auto* homology = app.add_subcommand("homology", "Betti numbers, representatives and induced binary products");
  add_common(homology);

  auto* massey = app.add_subcommand("massey", "Evaluate the document's Massey product queries");
  add_common(massey);
  auto* seed_opt = massey->add_option("--seed", seed, "Seed for a randomized-choice comparison run");

  std::string out_dir = ".";
  auto* examples = app.add_subcommand("examples", "Write the canned example documents");
  examples->add_option("--output", out_dir, "Directory to write into");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  try {
    if (*examples) {
      std::filesystem::create_directories(out_dir);
      for (const auto& [name, text] : example_documents()) {
        write_output((std::filesystem::path(out_dir) / name).string(), text);
        std::cerr << "wrote " << (std::filesystem::path(out_dir) / name).string() << "\n";
      }
      return kOk;
    }

    const Document doc = parse_document(read_input(input));
    RunOptions options;
    options.scope = scope == "full" ? Scope::full : Scope::declared;
    options.verbose = verbose;
    if (*seed_opt) options.seed = seed;

    Report report;
    if (*validate) {
      report = cmd_validate(doc, options);
    } else if (*homology) {
      report = cmd_homology(doc, options);
    } else {
      report = cmd_massey(doc, options);
    }
    write_output(output, format == "text" ? render_text(report) : report.body.dump(2) + "\n");
    return report.exit_code;
  } catch (const massey::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const massey::ConstructionError& e) {
    std::cerr << "construction rejected: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const massey::StructuralError& e) {
    std::cerr << "structural error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kValidationFailure;
  }
}
