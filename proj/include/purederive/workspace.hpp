#pragma once

#include <json.hpp>

#include "purederive/verify.hpp"

namespace purederive {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  std::string object_name;
  ValidationError(const std::string& name, const std::string& reason)
      : std::runtime_error(name + ": " + reason), object_name(name) {}
};

struct UnknownCommand : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedOperation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HarnessConfig {
  std::uint64_t seed = 1;
  int count = 50;
  int depth = 6;
  int family_cap = 64;
  SampleConfig sample;
};

/// Named modules, maps, complexes, chain maps, towers, and cocycles over one
/// declared ring, loaded from a single JSON document.
class Workspace {
 public:
  static Workspace load(const std::string& path);
  static Workspace parse(const std::string& text);

  /// Canonical serialization; loading the result and emitting again is
  /// byte-identical.
  std::string emit() const;

  const BaseRing& ring() const { return ring_; }
  const HarnessConfig& harness() const { return harness_; }

  const FgModule& module(const std::string& name) const;
  const ModuleMap& module_map(const std::string& name) const;
  const BoundedComplex& complex(const std::string& name) const;
  const ChainMap& chain_map(const std::string& name) const;
  const Tower& tower(const std::string& name) const;
  const Cocycle& cocycle(const std::string& name) const;

  const std::map<std::string, BoundedComplex>& complexes() const {
    return complexes_;
  }

 private:
  BaseRing ring_ = BaseRing::integers();
  HarnessConfig harness_;
  std::map<std::string, FgModule> modules_;
  std::map<std::string, ModuleMap> maps_;
  std::map<std::string, BoundedComplex> complexes_;
  std::map<std::string, ChainMap> chain_maps_;
  std::map<std::string, Tower> towers_;
  std::map<std::string, Cocycle> cocycles_;
};

struct Report {
  std::string command;
  bool ok = true;
  bool unsupported = false;
  nlohmann::json body = nlohmann::json::object();
  std::vector<std::string> lines;

  std::string render_json() const;
  std::string render_text() const;
  int exit_code() const { return unsupported ? 3 : ok ? 0 : 1; }
};

struct CommandOptions {
  std::uint64_t seed = 0;  // 0: take the workspace harness seed
  int count = 0;
  int depth = 0;
  int family_cap = 0;
  std::string side = "both";        // resolve
  int degree = 0;                   // pext
  std::string route = "projective"; // pext
};

/// Dispatches profile / resolve / pext / ppd / pid / roof / tower / verify.
Report run(const Workspace& w, const std::vector<std::string>& args,
           const CommandOptions& opts);

}  // namespace purederive
