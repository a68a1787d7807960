#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "semisort/hash.hpp"

namespace semisort::apps {

/// One n-gram: key = its first n-1 words, value = its last word. Both are
/// byte ranges of the corpus' cleaned text.
struct NGramRecord {
  std::uint64_t key_offset = 0;
  std::uint64_t value_offset = 0;
  std::uint32_t key_length = 0;
  std::uint32_t value_length = 0;

  friend bool operator==(const NGramRecord&, const NGramRecord&) = default;
};

struct NGramCorpus {
  std::string text;  // cleaned: lowercase words separated by single spaces
  std::size_t word_count = 0;
  std::vector<NGramRecord> records;

  std::string_view key(const NGramRecord& r) const { return {text.data() + r.key_offset, r.key_length}; }
  std::string_view value(const NGramRecord& r) const {
    return {text.data() + r.value_offset, r.value_length};
  }
};

/// Lowercases ASCII letters and turns every other byte (digits, punctuation,
/// whitespace, non-ASCII) into a word break.
std::string clean_text(std::string_view raw);

/// All windows of gram_size consecutive words. Throws ContractError when
/// gram_size < 2.
NGramCorpus build_ngrams(std::string_view raw, std::size_t gram_size);

/// Key adapter over a corpus. Keys compare by bytes; the hash combines
/// per-word hashes computed on the fly.
struct NGramAdapter {
  using record_type = NGramRecord;
  using key_type = std::string_view;

  const NGramCorpus* corpus = nullptr;

  std::string_view key_of(const NGramRecord& r) const { return corpus->key(r); }
  bool eq(std::string_view a, std::string_view b) const { return a == b; }
  bool lt(std::string_view a, std::string_view b) const { return a < b; }
  std::uint64_t hash(std::string_view k) const {
    std::uint64_t h = 0x2545f4914f6cdd1dULL;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= k.size(); ++i) {
      if (i == k.size() || k[i] == ' ') {
        h = hash_combine(h, hash_bytes(k.substr(start, i - start)));
        start = i + 1;
      }
    }
    return h;
  }
};

}  // namespace semisort::apps
