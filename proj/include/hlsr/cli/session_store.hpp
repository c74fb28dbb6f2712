#pragma once

#include <stdexcept>
#include <string>

#include "hlsr/orchestrator/session.hpp"

namespace hlsr::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws IoError.
std::string read_file(const std::string& path);

/// Writes to a temporary file next to `path`, then renames it into place.
void write_atomic(const std::string& path, const std::string& content);

std::string serialize(const orch::Session& s);
void save_session(const orch::Session& s, const std::string& path);
/// Throws IoError or std::invalid_argument.
orch::Session load_session(const std::string& path);

/// File name for a session: characters outside [A-Za-z0-9._-] become '_'.
std::string session_file_name(const std::string& name);

}  // namespace hlsr::cli
