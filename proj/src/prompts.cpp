#include "humanoid/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "humanoid/scripted_provider.hpp"

namespace humanoid {

namespace {

bool placeholder_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

/// Calls `on_field(begin, end, name)` for each {name} in `s`.
template <typename F>
void scan(const std::string& s, F&& on_field) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '{') continue;
    std::size_t j = i + 1;
    while (j < s.size() && placeholder_char(s[j])) ++j;
    if (j < s.size() && s[j] == '}' && j > i + 1) {
      on_field(i, j + 1, s.substr(i + 1, j - i - 1));
      i = j;
    }
  }
}

}  // namespace

std::vector<std::string> placeholders(const std::string& tmpl) {
  std::vector<std::string> out;
  scan(tmpl, [&](std::size_t, std::size_t, const std::string& name) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  });
  return out;
}

const std::vector<std::string>& PromptLibrary::required_names() {
  static const std::vector<std::string> names = {
      "classify_need",   "classify_emotion", "judge_enjoyment", "classify_sentiment",
      "day_outline",     "hourly_plan",      "quarter_hour_plan", "plan_change",
      "regenerate_plan", "choose_location",  "decide_dialogue", "next_utterance",
  };
  return names;
}

std::filesystem::path PromptLibrary::default_dir() { return default_data_root() / "prompts"; }

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
  std::map<std::string, std::string> templates;
  for (const auto& name : required_names()) {
    const auto path = dir / (name + ".txt");
    std::ifstream in(path);
    if (!in) throw PromptError("missing prompt template " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    templates[name] = std::move(text);
  }
  return PromptLibrary(std::move(templates));
}

const std::string& PromptLibrary::raw(const std::string& name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw PromptError("no prompt template named '" + name + "'");
  return it->second;
}

std::string PromptLibrary::render(const std::string& name, const std::map<std::string, std::string>& vars) const {
  const std::string& tmpl = raw(name);
  std::string out;
  std::size_t copied = 0;
  scan(tmpl, [&](std::size_t begin, std::size_t end, const std::string& field) {
    auto it = vars.find(field);
    if (it == vars.end()) throw PromptError("prompt '" + name + "' has no value for {" + field + "}");
    out.append(tmpl, copied, begin - copied);
    out += it->second;
    copied = end;
  });
  out.append(tmpl, copied, std::string::npos);
  return out;
}

}  // namespace humanoid
