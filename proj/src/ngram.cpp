#include "semisort/apps/ngram.hpp"

#include "semisort/types.hpp"

namespace semisort::apps {

std::string clean_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool in_word = false;
  for (unsigned char c : raw) {
    const bool upper = c >= 'A' && c <= 'Z';
    const bool lower = c >= 'a' && c <= 'z';
    if (upper || lower) {
      if (!in_word && !out.empty()) out.push_back(' ');
      out.push_back(static_cast<char>(upper ? c - 'A' + 'a' : c));
      in_word = true;
    } else {
      in_word = false;
    }
  }
  return out;
}

NGramCorpus build_ngrams(std::string_view raw, std::size_t gram_size) {
  if (gram_size < 2) throw ContractError("n-gram size must be at least 2");
  NGramCorpus corpus;
  corpus.text = clean_text(raw);
  const std::string& t = corpus.text;

  std::vector<std::uint64_t> starts;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (i == 0 || t[i - 1] == ' ') starts.push_back(i);
  corpus.word_count = starts.size();
  auto word_end = [&](std::size_t w) { return w + 1 < starts.size() ? starts[w + 1] - 1 : t.size(); };

  if (starts.size() < gram_size) return corpus;
  corpus.records.reserve(starts.size() - gram_size + 1);
  for (std::size_t w = 0; w + gram_size <= starts.size(); ++w) {
    const std::size_t last = w + gram_size - 1;
    NGramRecord r;
    r.key_offset = starts[w];
    r.key_length = static_cast<std::uint32_t>(word_end(last - 1) - starts[w]);
    r.value_offset = starts[last];
    r.value_length = static_cast<std::uint32_t>(word_end(last) - starts[last]);
    corpus.records.push_back(r);
  }
  return corpus;
}

}  // namespace semisort::apps
