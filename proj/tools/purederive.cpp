#include <CLI11.hpp>

#include <iostream>

#include "purederive/workspace.hpp"

using namespace purederive;

int main(int argc, char** argv) {
  CLI::App app{"purederive: exact workbench for pure derived categories"};
  app.allow_extras();

  std::string workspace_path, format = "text";
  CommandOptions opts;
  std::vector<std::string> command;
  app.add_option("--workspace", workspace_path, "workspace JSON file");
  app.add_option("--seed", opts.seed, "harness seed override");
  app.add_option("--count", opts.count, "instance count override");
  app.add_option("--depth", opts.depth, "truncation depth override");
  app.add_option("--family-cap", opts.family_cap, "test family cap override");
  app.add_option("--format", format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--side", opts.side, "resolve: projective, injective, both")
      ->check(CLI::IsMember({"projective", "injective", "both"}));
  app.add_option("--i", opts.degree, "pext: cohomological degree");
  app.add_option("--route", opts.route, "pext: projective, injective, both")
      ->check(CLI::IsMember({"projective", "injective", "both"}));
  app.add_option("command", command, "command and its arguments");

  CLI11_PARSE(app, argc, argv);
  for (const auto& extra : app.remaining()) command.push_back(extra);

  try {
    Workspace w = workspace_path.empty()
                      ? Workspace::parse(R"({"ring": {"kind": "Z"}})")
                      : Workspace::load(workspace_path);
    Report rep = run(w, command, opts);
    std::cout << (format == "json" ? rep.render_json() : rep.render_text());
    return rep.exit_code();
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownCommand& e) {
    std::cerr << "unknown command: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedInjectiveBase& e) {
    std::cerr << "unsupported operation: " << e.what() << "\n";
    return 3;
  } catch (const UnsupportedOperation& e) {
    std::cerr << "unsupported operation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return 1;
  }
}
