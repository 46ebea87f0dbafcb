// Dense Online-VB local step: fully factorized coordinate ascent over
// per-token topic distributions, matched round-for-round against the Gibbs
// sweep budget. Shares the global update and schedule with the trainer.
#pragma once

#include <vector>

#include "slda/corpus.hpp"
#include "slda/sampler.hpp"

namespace slda {

// Local variational state after a fitted document. phi rows are indexed by
// distinct word (see `words`); tokens of the same type share a row.
struct LocalVB {
  std::vector<int> words;        // distinct word ids in the document
  std::vector<int> word_counts;  // multiplicity per distinct word
  std::vector<double> phi;       // |words| x K, row-normalized
  std::vector<double> gamma;     // K, >= alpha
};

LocalVB vb_local_fit(const Document& doc, const GlobalState& state,
                     const TopicCache& cache, double alpha, int rounds);

// Dense per-document expected counts E[N_dkw] = sum_i phi_ik I[w_i = w],
// packaged like a Gibbs contribution so it can feed the same aggregation.
DocContribution vb_local_step(const Document& doc, const GlobalState& state,
                              const TopicCache& cache, double alpha,
                              int rounds);

}  // namespace slda
