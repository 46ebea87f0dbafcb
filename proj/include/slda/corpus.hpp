// Tokenized document collections: UCI bag-of-words I/O, minibatch draws,
// holdout splits, and the document-frequency index used by coherence.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "slda/rng.hpp"

namespace slda {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  int size() const { return static_cast<int>(words_.size()); }
  const std::string& word(int id) const { return words_[id]; }
  // -1 if absent.
  int id(const std::string& word) const;
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
};

struct Document {
  int id = 0;
  std::vector<int> tokens;  // word ids, length N_d

  int length() const { return static_cast<int>(tokens.size()); }
  bool empty() const { return tokens.empty(); }
};

struct Corpus {
  std::vector<Document> documents;
  std::shared_ptr<const Vocabulary> vocabulary;

  int num_documents() const { return static_cast<int>(documents.size()); }
  int vocab_size() const { return vocabulary ? vocabulary->size() : 0; }
  std::int64_t total_tokens() const;
};

// Document frequencies D(w) and co-document counts D(w1,w2) for a requested
// word set. Pair counts are stored only for pairs within the set.
class DocFrequencies {
 public:
  int single(int w) const;
  int pair(int w1, int w2) const;  // symmetric
  int num_documents() const { return num_documents_; }

 private:
  friend DocFrequencies doc_frequencies(const Corpus&,
                                        const std::unordered_set<int>&);
  std::unordered_map<int, int> single_;
  std::unordered_map<std::uint64_t, int> pair_;
  int num_documents_ = 0;
};

// UCI bag-of-words: line 1 = D, line 2 = V, line 3 = NNZ, then NNZ lines of
// "docID wordID count" with 1-based ids. Each entry expands to `count`
// consecutive tokens; tokens within a document are sorted by word id.
Corpus load_uci(const std::string& docword_path, const std::string& vocab_path);

// Inverse of load_uci, for round-trips and persisting splits.
void save_uci(const Corpus& corpus, const std::string& docword_path);
void save_vocabulary(const Vocabulary& vocab, const std::string& path);

// `size` documents drawn uniformly with replacement, in draw order.
std::vector<const Document*> sample_minibatch(const Corpus& corpus, int size,
                                              Rng& rng);

// Disjoint partition sharing one Vocabulary; the second part holds
// round(fraction * D) documents. Original document order is preserved
// within each part.
std::pair<Corpus, Corpus> split_holdout(const Corpus& corpus, double fraction,
                                        Rng& rng);

DocFrequencies doc_frequencies(const Corpus& corpus,
                               const std::unordered_set<int>& word_set);

}  // namespace slda
