#include "gcause/seqdata.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace gcause {

std::size_t Dataset::total_events() const {
  std::size_t n = 0;
  for (const auto& s : sequences) n += s.size();
  return n;
}

std::vector<long long> Dataset::type_counts() const {
  std::vector<long long> counts(static_cast<std::size_t>(num_types), 0);
  for (const auto& s : sequences)
    for (const auto& e : s.events) counts[static_cast<std::size_t>(e.k)]++;
  return counts;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.num_types = num_types;
  out.sequences.reserve(indices.size());
  for (std::size_t i : indices) {
    require(i < sequences.size(), Error::Kind::invalid_argument,
            "subset: index out of range");
    out.sequences.push_back(sequences[i]);
  }
  return out;
}

std::optional<Violation> validate(const EventSequence& seq, int num_types) {
  if (num_types <= 0) return Violation{"num_types must be positive", 0};
  if (!(seq.horizon > 0.0)) return Violation{"horizon must be positive", 0};
  double prev = 0.0;
  for (std::size_t i = 0; i < seq.events.size(); ++i) {
    const Event& e = seq.events[i];
    if (!(e.t >= 0.0)) return Violation{"negative timestamp", i};
    if (i > 0 && e.t < prev) return Violation{"non-monotone timestamps", i};
    if (e.k < 0 || e.k >= num_types) return Violation{"type out of range", i};
    prev = e.t;
  }
  if (!seq.events.empty() && seq.events.back().t > seq.horizon)
    return Violation{"timestamp exceeds horizon", seq.events.size() - 1};
  return std::nullopt;
}

Batch make_batch(const Dataset& data, const std::vector<std::size_t>& indices) {
  Batch b;
  b.indices = indices;
  b.num_types = data.num_types;
  for (std::size_t i : indices) {
    require(i < data.sequences.size(), Error::Kind::invalid_argument,
            "make_batch: index out of range");
    b.max_len = std::max(b.max_len, static_cast<int>(data.sequences[i].size()));
  }
  std::size_t rows = indices.size();
  b.times.assign(rows * static_cast<std::size_t>(b.max_len), 0.0);
  b.types.assign(rows * static_cast<std::size_t>(b.max_len), data.num_types);
  b.lengths.resize(rows);
  b.horizons.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const EventSequence& s = data.sequences[indices[r]];
    int n = static_cast<int>(s.size());
    b.lengths[r] = n;
    b.horizons[r] = s.horizon;
    double last = n > 0 ? s.events.back().t : 0.0;
    for (int j = 0; j < b.max_len; ++j) {
      std::size_t off = r * static_cast<std::size_t>(b.max_len) + j;
      if (j < n) {
        b.times[off] = s.events[static_cast<std::size_t>(j)].t;
        b.types[off] = s.events[static_cast<std::size_t>(j)].k;
      } else {
        b.times[off] = last;
      }
    }
  }
  return b;
}

std::vector<Batch> bucket_batches(const Dataset& data, int batch_size, Rng& rng) {
  require(batch_size >= 1, Error::Kind::invalid_argument, "batch_size must be >= 1");
  std::vector<std::size_t> order(data.num_sequences());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);  // randomize ties before the stable sort
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data.sequences[a].size() < data.sequences[b].size();
  });
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < order.size(); i += static_cast<std::size_t>(batch_size)) {
    std::size_t end = std::min(order.size(), i + static_cast<std::size_t>(batch_size));
    groups.emplace_back(order.begin() + static_cast<long>(i), order.begin() + static_cast<long>(end));
  }
  rng.shuffle(groups);
  std::vector<Batch> batches;
  batches.reserve(groups.size());
  for (const auto& g : groups) batches.push_back(make_batch(data, g));
  return batches;
}

std::vector<FoldSplit> kfold_split(const Dataset& data, int folds, Rng& rng) {
  std::size_t s = data.num_sequences();
  require(folds >= 2, Error::Kind::invalid_argument, "folds must be >= 2");
  require(s >= static_cast<std::size_t>(folds), Error::Kind::invalid_argument,
          "fewer sequences than folds");
  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<FoldSplit> out(static_cast<std::size_t>(folds));
  std::size_t base = s / static_cast<std::size_t>(folds);
  std::size_t extra = s % static_cast<std::size_t>(folds);
  std::size_t pos = 0;
  for (int f = 0; f < folds; ++f) {
    std::size_t len = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
    auto& split = out[static_cast<std::size_t>(f)];
    split.test.assign(order.begin() + static_cast<long>(pos),
                      order.begin() + static_cast<long>(pos + len));
    split.train.reserve(s - len);
    for (std::size_t i = 0; i < s; ++i) {
      if (i < pos || i >= pos + len) split.train.push_back(order[i]);
    }
    pos += len;
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Dataset load_jsonl(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Error::Kind::io, "cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  Dataset data;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      fail(Error::Kind::parse,
           path + ": parse error at line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!have_header) {
      require(j.is_object() && j.contains("K") && j["K"].is_number_integer(),
              Error::Kind::parse,
              path + ": line " + std::to_string(line_no) + ": expected header {\"K\": int}");
      data.num_types = j["K"].get<int>();
      require(data.num_types > 0, Error::Kind::parse,
              path + ": header K must be positive");
      have_header = true;
      continue;
    }
    require(j.is_object() && j.contains("seq") && j.contains("T"), Error::Kind::parse,
            path + ": line " + std::to_string(line_no) + ": expected {\"seq\": ..., \"T\": ...}");
    EventSequence seq;
    seq.horizon = j["T"].get<double>();
    for (const auto& pair : j["seq"]) {
      require(pair.is_array() && pair.size() == 2, Error::Kind::parse,
              path + ": line " + std::to_string(line_no) + ": event must be [t, k]");
      seq.events.push_back({pair[0].get<double>(), pair[1].get<int>()});
    }
    if (auto v = validate(seq, data.num_types)) {
      fail(Error::Kind::parse, path + ": sequence " + std::to_string(data.sequences.size()) +
                                   " invalid: " + v->message);
    }
    data.sequences.push_back(std::move(seq));
  }
  require(have_header, Error::Kind::parse, path + ": missing header line {\"K\": int}");
  return data;
}

void save_jsonl(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), Error::Kind::io, "cannot write " + path);
  out << "{\"K\": " << data.num_types << "}\n";
  for (const auto& seq : data.sequences) {
    out << "{\"seq\": [";
    for (std::size_t i = 0; i < seq.events.size(); ++i) {
      if (i) out << ", ";
      out << '[' << format_double(seq.events[i].t) << ", " << seq.events[i].k << ']';
    }
    out << "], \"T\": " << format_double(seq.horizon) << "}\n";
  }
  require(out.good(), Error::Kind::io, "write failed for " + path);
}

Array load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Error::Kind::io, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(Error::Kind::parse, path + ": bad numeric cell '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), Error::Kind::parse, path + ": empty matrix");
  std::size_t n = rows.size();
  for (const auto& r : rows)
    require(r.size() == n, Error::Kind::parse, path + ": matrix is not square");
  Array m = Array::zeros({static_cast<int>(n), static_cast<int>(n)});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

void save_matrix_csv(const Array& matrix, const std::string& path) {
  require(matrix.shape.size() == 2 && matrix.rows() == matrix.cols(),
          Error::Kind::invalid_argument, "matrix must be square");
  std::ofstream out(path);
  require(out.good(), Error::Kind::io, "cannot write " + path);
  int n = matrix.rows();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out << ',';
      out << format_double(matrix.at(i, j));
    }
    out << '\n';
  }
  require(out.good(), Error::Kind::io, "write failed for " + path);
}

}  // namespace gcause
