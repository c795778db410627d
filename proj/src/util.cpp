#include "harmonica/util.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>

#include "harmonica/error.hpp"

namespace harmonica {

int thread_budget() {
  if (const char* env = std::getenv("HARMONICA_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(int n, const std::function<void(int)>& f) {
  int nt = std::min(thread_budget(), n);
  if (nt <= 1 || n < 64) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
    });
  for (auto& th : pool) th.join();
}

Complex parse_complex(const std::string& text) {
  if (text.empty()) fail(Errc::InvalidParameters, "empty complex literal");
  std::string s = text;
  // split at the last top-level +/- (not an exponent sign, not leading)
  size_t split = std::string::npos;
  for (size_t i = s.size(); i-- > 1;) {
    char c = s[i];
    if ((c == '+' || c == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto parse_real = [&](std::string part) -> double {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    char* end = nullptr;
    double v = std::strtod(part.c_str(), &end);
    if (end != part.c_str() + part.size())
      fail(Errc::InvalidParameters, "bad numeric literal '" + part + "'");
    return v;
  };
  bool has_i = s.back() == 'i' || s.back() == 'I';
  if (!has_i) {
    if (split == std::string::npos) return {parse_real(s), 0.0};
    // purely real like "1e-3" already handled by strtod; treat whole string
    return {parse_real(s), 0.0};
  }
  s.pop_back();  // strip i
  if (split == std::string::npos || split >= s.size())
    return {0.0, parse_real(s)};
  return {parse_real(s.substr(0, split)), parse_real(s.substr(split))};
}

std::string format_complex(Complex z) {
  char buf[64];
  if (z.imag() == 0) {
    std::snprintf(buf, sizeof buf, "%.12g", z.real());
    return buf;
  }
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
  return buf;
}

}  // namespace harmonica
