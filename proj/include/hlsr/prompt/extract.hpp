#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hlsr::prompt {

class NoCodeFound : public std::runtime_error {
 public:
  NoCodeFound() : std::runtime_error("response contains no code") {}
};

struct CandidateCode {
  std::string text;
  std::string step_id;
  int response_index = 0;
};

/// Longest fenced block; otherwise the longest run of lines that parses as C
/// and declares something. Throws NoCodeFound.
CandidateCode extract_code(std::string_view response, std::string step_id = {}, int response_index = 0);

}  // namespace hlsr::prompt
