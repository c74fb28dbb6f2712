#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace hlsr::test {

inline std::string corpus(const std::string& rel) { return std::string(HLSR_TEST_CORPUS) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Generator for property tests. Independent of the driver PRNG on purpose.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull) {}

  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  long long range(long long lo, long long hi) { return lo + static_cast<long long>(next() % (hi - lo + 1)); }
  bool coin(int percent = 50) { return range(0, 99) < percent; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(range(0, static_cast<long long>(v.size()) - 1))];
  }
  std::string ident(int max_len = 8) {
    static const char* a = "abcdefghijklmnopqrstuvwxyz";
    std::string s(1, a[range(0, 25)]);
    for (long long i = range(0, max_len - 1); i > 0; --i) s += "abcdefghijklmnopqrstuvwxyz0123456789_"[range(0, 36)];
    return "v_" + s;
  }
  std::string text(int max_len) {
    std::string s;
    for (long long i = range(0, max_len); i > 0; --i) s += static_cast<char>(range(32, 126));
    return s;
  }

 private:
  std::uint64_t s_;
};

}  // namespace hlsr::test
