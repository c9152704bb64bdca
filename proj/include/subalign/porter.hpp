#pragma once

#include <string>
#include <string_view>

namespace subalign {

// Classic Porter suffix-stripping stemmer (the 1980 rule set). Input must be
// a lowercase ASCII word; words of length <= 2 come back unchanged.
class porter_stemmer {
 public:
  static std::string stem(std::string_view word) {
    if (word.size() <= 2) return std::string(word);
    porter_stemmer p(word);
    p.step1a();
    p.step1b();
    p.step1c();
    p.step2();
    p.step3();
    p.step4();
    p.step5();
    return p.w_;
  }

 private:
  explicit porter_stemmer(std::string_view word) : w_(word) {}

  std::string w_;

  bool is_consonant(size_t i) const {
    char c = w_[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
    if (c == 'y') return i == 0 ? true : !is_consonant(i - 1);
    return true;
  }

  // Number of VC sequences in w_[0, end).
  int measure(size_t end) const {
    int m = 0;
    size_t i = 0;
    while (i < end && is_consonant(i)) ++i;
    while (i < end) {
      while (i < end && !is_consonant(i)) ++i;
      if (i >= end) break;
      ++m;
      while (i < end && is_consonant(i)) ++i;
    }
    return m;
  }

  bool has_vowel(size_t end) const {
    for (size_t i = 0; i < end; ++i)
      if (!is_consonant(i)) return true;
    return false;
  }

  bool ends_double_consonant() const {
    size_t n = w_.size();
    return n >= 2 && w_[n - 1] == w_[n - 2] && is_consonant(n - 1);
  }

  // consonant-vowel-consonant at the end, last consonant not w, x, or y.
  bool ends_cvc(size_t end) const {
    if (end < 3) return false;
    if (!is_consonant(end - 3) || is_consonant(end - 2) || !is_consonant(end - 1)) return false;
    char c = w_[end - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends_with(std::string_view suffix) const {
    return w_.size() >= suffix.size() &&
           std::string_view(w_).substr(w_.size() - suffix.size()) == suffix;
  }

  size_t stem_len(std::string_view suffix) const { return w_.size() - suffix.size(); }

  // Replaces suffix when the measure of the remaining stem exceeds min_m.
  bool replace_if_m(std::string_view suffix, std::string_view repl, int min_m) {
    if (!ends_with(suffix)) return false;
    if (measure(stem_len(suffix)) > min_m) w_ = w_.substr(0, stem_len(suffix)) + std::string(repl);
    return true;  // longest-match rule: a matching suffix consumes the step
  }

  void step1a() {
    if (ends_with("sses"))
      w_.resize(w_.size() - 2);
    else if (ends_with("ies"))
      w_.resize(w_.size() - 2);
    else if (ends_with("ss"))
      ;
    else if (ends_with("s"))
      w_.resize(w_.size() - 1);
  }

  void step1b() {
    if (ends_with("eed")) {
      if (measure(stem_len("eed")) > 0) w_.resize(w_.size() - 1);
      return;
    }
    bool removed = false;
    if (ends_with("ed") && has_vowel(stem_len("ed"))) {
      w_.resize(w_.size() - 2);
      removed = true;
    } else if (ends_with("ing") && has_vowel(stem_len("ing"))) {
      w_.resize(w_.size() - 3);
      removed = true;
    }
    if (!removed) return;
    if (ends_with("at") || ends_with("bl") || ends_with("iz")) {
      w_.push_back('e');
    } else if (ends_double_consonant()) {
      char c = w_.back();
      if (c != 'l' && c != 's' && c != 'z') w_.resize(w_.size() - 1);
    } else if (measure(w_.size()) == 1 && ends_cvc(w_.size())) {
      w_.push_back('e');
    }
  }

  void step1c() {
    if (ends_with("y") && has_vowel(w_.size() - 1)) w_.back() = 'i';
  }

  void step2() {
    static constexpr std::pair<std::string_view, std::string_view> rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"}};
    apply_longest(rules, std::size(rules), 0);
  }

  void step3() {
    static constexpr std::pair<std::string_view, std::string_view> rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""}};
    apply_longest(rules, std::size(rules), 0);
  }

  void step4() {
    static constexpr std::string_view suffixes[] = {
        "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ism", "ate",
        "iti",   "ous",  "ive",  "ize",  "ion",  "al",   "er",  "ic",  "ou"};
    for (auto suffix : suffixes) {
      if (!ends_with(suffix)) continue;
      size_t end = stem_len(suffix);
      if (suffix == "ion" && !(end >= 1 && (w_[end - 1] == 's' || w_[end - 1] == 't'))) return;
      if (measure(end) > 1) w_.resize(end);
      return;
    }
  }

  void step5() {
    if (ends_with("e")) {
      size_t end = w_.size() - 1;
      int m = measure(end);
      if (m > 1 || (m == 1 && !ends_cvc(end))) w_.resize(end);
    }
    if (ends_double_consonant() && w_.back() == 'l' && measure(w_.size()) > 1)
      w_.resize(w_.size() - 1);
  }

  void apply_longest(const std::pair<std::string_view, std::string_view>* rules, size_t n,
                     int min_m) {
    const std::pair<std::string_view, std::string_view>* best = nullptr;
    for (size_t i = 0; i < n; ++i) {
      if (!ends_with(rules[i].first)) continue;
      if (best == nullptr || rules[i].first.size() > best->first.size()) best = &rules[i];
    }
    if (best) replace_if_m(best->first, best->second, min_m);
  }
};

inline std::string porter_stem(std::string_view word) { return porter_stemmer::stem(word); }

}  // namespace subalign
