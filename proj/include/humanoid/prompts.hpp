#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace humanoid {

class PromptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Named text templates with {placeholder} fields, one file per template
/// (`<name>.txt`). Trailing newlines are trimmed.
class PromptLibrary {
 public:
  PromptLibrary() = default;
  explicit PromptLibrary(std::map<std::string, std::string> templates) : templates_(std::move(templates)) {}

  static PromptLibrary load(const std::filesystem::path& dir);
  static std::filesystem::path default_dir();

  /// Names every provider operation expects.
  static const std::vector<std::string>& required_names();

  bool has(const std::string& name) const { return templates_.count(name) > 0; }
  const std::string& raw(const std::string& name) const;

  /// Substitutes every {key}. Throws PromptError on an unknown template or a
  /// placeholder with no value.
  std::string render(const std::string& name, const std::map<std::string, std::string>& vars) const;

 private:
  std::map<std::string, std::string> templates_;
};

/// Placeholder names appearing in `tmpl`, in order of first appearance.
std::vector<std::string> placeholders(const std::string& tmpl);

}  // namespace humanoid
