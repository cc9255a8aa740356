#ifndef GCAUSE_SEQDATA_HPP
#define GCAUSE_SEQDATA_HPP

#include <optional>
#include <string>
#include <vector>

#include "gcause/array.hpp"
#include "gcause/rng.hpp"

namespace gcause {

struct Event {
  double t = 0.0;
  int k = 0;
};

struct EventSequence {
  std::vector<Event> events;
  double horizon = 0.0;

  std::size_t size() const { return events.size(); }
};

struct Dataset {
  std::vector<EventSequence> sequences;
  int num_types = 0;

  std::size_t num_sequences() const { return sequences.size(); }
  std::size_t total_events() const;
  // Per-type event counts across all sequences.
  std::vector<long long> type_counts() const;
  Dataset subset(const std::vector<std::size_t>& indices) const;
};

struct Violation {
  std::string message;
  std::size_t event_index = 0;  // first offending event (0 for sequence-level)
};

// Returns the first violated invariant, or nullopt when the sequence is valid
// for a dataset with `num_types` event types.
std::optional<Violation> validate(const EventSequence& seq, int num_types);

// Padded mini-batch. Timestamps pad with the sequence's last timestamp (0 for
// empty sequences) so elapsed-time features vanish at padding; types pad with
// the sentinel `num_types`, which maps to the zero embedding row.
struct Batch {
  std::vector<std::size_t> indices;
  int num_types = 0;
  int max_len = 0;
  std::vector<double> times;  // size() x max_len, row-major
  std::vector<int> types;     // size() x max_len
  std::vector<int> lengths;
  std::vector<double> horizons;

  std::size_t size() const { return indices.size(); }
  double time_at(std::size_t b, int j) const { return times[b * static_cast<std::size_t>(max_len) + j]; }
  int type_at(std::size_t b, int j) const { return types[b * static_cast<std::size_t>(max_len) + j]; }
};

Batch make_batch(const Dataset& data, const std::vector<std::size_t>& indices);

// Length-bucketed batching: sequences are grouped so that similar lengths
// share a batch, then the batch order is shuffled.
std::vector<Batch> bucket_batches(const Dataset& data, int batch_size, Rng& rng);

// Disjoint (train, test) index partitions; fold sizes differ by at most one.
struct FoldSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
std::vector<FoldSplit> kfold_split(const Dataset& data, int folds, Rng& rng);

// JSONL: header line {"K": int}, then one line per sequence
// {"seq": [[t, k], ...], "T": float}. Timestamps are written as decimal with
// 17 significant digits so that save-then-load is the identity.
Dataset load_jsonl(const std::string& path);
void save_jsonl(const Dataset& data, const std::string& path);

// K x K matrix as CSV, row = effect type, column = cause type.
Array load_matrix_csv(const std::string& path);
void save_matrix_csv(const Array& matrix, const std::string& path);

std::string format_double(double v);  // %.17g

}  // namespace gcause

#endif  // GCAUSE_SEQDATA_HPP
