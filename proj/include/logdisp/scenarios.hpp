#ifndef LOGDISP_SCENARIOS_HPP
#define LOGDISP_SCENARIOS_HPP

#include <map>
#include <string>
#include <vector>

namespace logdisp {

/// Flat key-value config with [sections]; '#' starts a comment.
struct Config {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::string raw;

  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text);

  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  double get_num(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;

  unsigned long long hash() const;  // FNV-1a over the raw text
};

const std::vector<std::string>& scenario_names();

/// Runs one scenario; writes <outdir>/<name>.csv (and .svg when it makes
/// sense). Exit code 0 on success, 2 when an acceptance check fails,
/// 1 on config errors.
int run_scenario(const std::string& config_path);

/// Full invariant suite across all modules; prints one pass/fail line per
/// invariant. Returns the number of failures.
int self_test();

}  // namespace logdisp

#endif
