#include "slda/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace slda {

namespace {

std::uint64_t pair_key(int w1, int w2) {
  const std::uint64_t lo = static_cast<std::uint64_t>(std::min(w1, w2));
  const std::uint64_t hi = static_cast<std::uint64_t>(std::max(w1, w2));
  return (hi << 32) | lo;
}

long long parse_positive_int(const std::string& token, const std::string& path,
                             std::size_t line, const char* what,
                             bool allow_zero) {
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(token, &pos);
  } catch (const std::exception&) {
    throw ParseError(path, line, std::string("invalid ") + what + " '" + token + "'");
  }
  if (pos != token.size()) {
    throw ParseError(path, line, std::string("invalid ") + what + " '" + token + "'");
  }
  if (value < 0 || (!allow_zero && value == 0)) {
    throw ParseError(path, line, std::string(what) + " must be " +
                                     (allow_zero ? "non-negative" : "positive"));
  }
  return value;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  ids_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    auto [it, inserted] = ids_.emplace(words_[i], static_cast<int>(i));
    if (!inserted) {
      throw std::invalid_argument("duplicate vocabulary word '" + words_[i] + "'");
    }
  }
}

int Vocabulary::id(const std::string& word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? -1 : it->second;
}

std::int64_t Corpus::total_tokens() const {
  std::int64_t n = 0;
  for (const auto& d : documents) n += d.length();
  return n;
}

int DocFrequencies::single(int w) const {
  auto it = single_.find(w);
  return it == single_.end() ? 0 : it->second;
}

int DocFrequencies::pair(int w1, int w2) const {
  auto it = pair_.find(pair_key(w1, w2));
  return it == pair_.end() ? 0 : it->second;
}

Corpus load_uci(const std::string& docword_path, const std::string& vocab_path) {
  std::ifstream vf(vocab_path);
  if (!vf) throw std::runtime_error("cannot open vocabulary file: " + vocab_path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(vf, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    words.push_back(line);
  }
  auto vocab = std::make_shared<Vocabulary>(std::move(words));

  std::ifstream df(docword_path);
  if (!df) throw std::runtime_error("cannot open docword file: " + docword_path);

  std::size_t lineno = 0;
  auto read_header_line = [&](const char* what) {
    if (!std::getline(df, line)) {
      throw ParseError(docword_path, lineno + 1, std::string("missing ") + what);
    }
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) {
      throw ParseError(docword_path, lineno, std::string("missing ") + what);
    }
    std::string extra;
    if (ss >> extra) {
      throw ParseError(docword_path, lineno, std::string("malformed ") + what);
    }
    return parse_positive_int(tok, docword_path, lineno, what, /*allow_zero=*/true);
  };

  const long long num_docs = read_header_line("document count");
  const long long vocab_size = read_header_line("vocabulary size");
  const long long nnz = read_header_line("entry count");

  if (vocab_size != vocab->size()) {
    throw ParseError(docword_path, 2,
                     "vocabulary size " + std::to_string(vocab_size) +
                         " does not match vocab file (" +
                         std::to_string(vocab->size()) + " words)");
  }

  // Collect (word, count) runs per document, then expand in word-id order.
  std::vector<std::vector<std::pair<int, int>>> entries(num_docs);
  for (long long i = 0; i < nnz; ++i) {
    if (!std::getline(df, line)) {
      throw ParseError(docword_path, lineno + 1,
                       "expected " + std::to_string(nnz) + " entries, got " +
                           std::to_string(i));
    }
    ++lineno;
    std::istringstream ss(line);
    std::string dtok, wtok, ctok;
    if (!(ss >> dtok >> wtok >> ctok)) {
      throw ParseError(docword_path, lineno, "malformed entry line");
    }
    const long long doc = parse_positive_int(dtok, docword_path, lineno, "doc id", false);
    const long long word = parse_positive_int(wtok, docword_path, lineno, "word id", false);
    const long long count = parse_positive_int(ctok, docword_path, lineno, "count", false);
    if (doc > num_docs) {
      throw ParseError(docword_path, lineno,
                       "doc id " + std::to_string(doc) + " out of range [1, " +
                           std::to_string(num_docs) + "]");
    }
    if (word > vocab_size) {
      throw ParseError(docword_path, lineno,
                       "word id " + std::to_string(word) + " out of range [1, " +
                           std::to_string(vocab_size) + "]");
    }
    entries[doc - 1].emplace_back(static_cast<int>(word - 1),
                                  static_cast<int>(count));
  }

  Corpus corpus;
  corpus.vocabulary = vocab;
  corpus.documents.resize(num_docs);
  for (long long d = 0; d < num_docs; ++d) {
    auto& runs = entries[d];
    std::sort(runs.begin(), runs.end());
    Document& doc = corpus.documents[d];
    doc.id = static_cast<int>(d);
    std::size_t total = 0;
    for (const auto& [w, c] : runs) total += c;
    doc.tokens.reserve(total);
    for (const auto& [w, c] : runs) {
      doc.tokens.insert(doc.tokens.end(), c, w);
    }
  }
  return corpus;
}

void save_uci(const Corpus& corpus, const std::string& docword_path) {
  std::ofstream out(docword_path);
  if (!out) throw std::runtime_error("cannot write docword file: " + docword_path);

  std::vector<std::map<int, int>> counts(corpus.num_documents());
  std::size_t nnz = 0;
  for (int d = 0; d < corpus.num_documents(); ++d) {
    for (int w : corpus.documents[d].tokens) ++counts[d][w];
    nnz += counts[d].size();
  }
  out << corpus.num_documents() << "\n" << corpus.vocab_size() << "\n" << nnz << "\n";
  for (int d = 0; d < corpus.num_documents(); ++d) {
    for (const auto& [w, c] : counts[d]) {
      out << (d + 1) << ' ' << (w + 1) << ' ' << c << "\n";
    }
  }
}

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vocab file: " + path);
  for (const auto& w : vocab.words()) out << w << "\n";
}

std::vector<const Document*> sample_minibatch(const Corpus& corpus, int size,
                                              Rng& rng) {
  if (corpus.documents.empty()) {
    throw std::invalid_argument("sample_minibatch: empty corpus");
  }
  if (size < 1) throw std::invalid_argument("sample_minibatch: size must be >= 1");
  std::vector<const Document*> batch;
  batch.reserve(size);
  const auto n = static_cast<std::uint64_t>(corpus.documents.size());
  for (int i = 0; i < size; ++i) {
    batch.push_back(&corpus.documents[rng.uniform_int(n)]);
  }
  return batch;
}

std::pair<Corpus, Corpus> split_holdout(const Corpus& corpus, double fraction,
                                        Rng& rng) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("split_holdout: fraction must lie in (0, 1)");
  }
  const int d = corpus.num_documents();
  const int holdout = static_cast<int>(std::lround(fraction * d));

  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = i;
  for (int i = d - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.uniform_int(i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<char> held(d, 0);
  for (int i = 0; i < holdout; ++i) held[order[i]] = 1;

  Corpus train, held_out;
  train.vocabulary = corpus.vocabulary;
  held_out.vocabulary = corpus.vocabulary;
  for (int i = 0; i < d; ++i) {
    (held[i] ? held_out : train).documents.push_back(corpus.documents[i]);
  }
  return {std::move(train), std::move(held_out)};
}

DocFrequencies doc_frequencies(const Corpus& corpus,
                               const std::unordered_set<int>& word_set) {
  DocFrequencies freqs;
  freqs.num_documents_ = corpus.num_documents();
  std::vector<int> present;
  for (const auto& doc : corpus.documents) {
    present.clear();
    std::unordered_set<int> seen;
    for (int w : doc.tokens) {
      if (word_set.count(w) && seen.insert(w).second) present.push_back(w);
    }
    std::sort(present.begin(), present.end());
    for (std::size_t i = 0; i < present.size(); ++i) {
      ++freqs.single_[present[i]];
      for (std::size_t j = i + 1; j < present.size(); ++j) {
        ++freqs.pair_[pair_key(present[i], present[j])];
      }
    }
  }
  // Words never seen still answer D(w) = 0.
  for (int w : word_set) freqs.single_.emplace(w, 0);
  return freqs;
}

}  // namespace slda
