#pragma once

#include <stdexcept>
#include <string>

namespace detach {

enum class Errc {
  missing_weight,
  invalid_weight,
  not_a_member,
  unknown_vertex,
  too_large,
  invalid_distribution,
  no_candidates,
  no_bridges,
  disconnected_terminals,
  infeasible_targets,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::missing_weight: return "MissingWeight";
    case Errc::invalid_weight: return "InvalidWeight";
    case Errc::not_a_member: return "NotAMember";
    case Errc::unknown_vertex: return "UnknownVertex";
    case Errc::too_large: return "TooLarge";
    case Errc::invalid_distribution: return "InvalidDistribution";
    case Errc::no_candidates: return "NoCandidates";
    case Errc::no_bridges: return "NoBridges";
    case Errc::disconnected_terminals: return "DisconnectedTerminals";
    case Errc::infeasible_targets: return "InfeasibleTargets";
  }
  return "Unknown";
}

// Domain-rule violation. The CLI maps these to exit code 3.
class DomainError : public std::runtime_error {
 public:
  DomainError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Malformed input file or flag value. CLI exit code 2.
class InputFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failure. CLI exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace detach
