#ifndef GCAUSE_NPP_HPP
#define GCAUSE_NPP_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gcause/basis.hpp"
#include "gcause/seqdata.hpp"

namespace gcause {

// Semi-parametric neural point process: type embedding -> gated recurrent
// encoder -> basis-weight head. The conditional intensity on the interval
// after event i is lambda_k(t) = sum_r alpha_{k,r}(h_i) psi_r(t - t_i), so
// its integral has the closed form sum_r alpha_{k,r}(h_i) Psi_r(dt).
struct NppModel {
  int num_types = 0;  // K
  int embed_dim = 64;
  int hidden_dim = 64;
  BasisFamily basis;

  // Type embeddings, (K+1) x embed_dim; row K is the null/padding type and is
  // pinned to zero (excluded from optimization).
  Array V;
  Array h0;  // 1 x hidden_dim, trainable initial state
  // Gated recurrent cell: r = sig(Wr v + Ur h + br), u = sig(Wu v + Uu h + bu),
  // c = tanh(Wc v + Uc (r*h) + bc), h' = (1-u)*h + u*c. W* are input_dim() x
  // hidden, U* hidden x hidden, b* 1 x hidden.
  Array Wr, Ur, br, Wu, Uu, bu, Wc, Uc, bc;
  // Weight head: alpha(h) = softplus(tanh(h W1 + b1) W2 + b2 + h Wskip),
  // output 1 x (K * R) laid out k-major (index k * R + r).
  Array W1, b1, W2, b2, Wskip;

  static NppModel init(int num_types, int embed_dim, int hidden_dim,
                       BasisFamily basis, std::uint64_t seed);

  int input_dim() const { return 1 + embed_dim; }
  int weight_dim() const { return num_types * basis.count; }

  std::vector<std::pair<std::string, Array*>> named_params();
  std::vector<std::pair<std::string, const Array*>> named_params() const;
  void enforce_null_row();
};

void save_checkpoint(const NppModel& model, const std::string& path);
NppModel load_checkpoint(const std::string& path);

// [theta(dt); V row for the type]; type index K (the null type) maps to the
// zero embedding row.
std::vector<double> embed_event(const NppModel& model, double dt, int type_index);

// Hidden states h_0..h_n (n+1 entries; h_0 is the learned initial state).
std::vector<std::vector<double>> encode(const NppModel& model, const EventSequence& seq);

// alpha(h) as a flat K*R vector for a plain hidden-state vector.
std::vector<double> alpha_weights(const NppModel& model, const std::vector<double>& h);

// Intensity / cumulative intensity of every type at elapsed time dt after the
// state h.
std::vector<double> cif(const NppModel& model, const std::vector<double>& h, double dt);
std::vector<double> cumulative_intensity(const NppModel& model,
                                         const std::vector<double>& h, double dt);

// Negative log-likelihood of one sequence, including the terminal survival
// interval (t_n, T]. Throws Error::numeric naming the event index if a
// non-finite term appears.
double nll(const NppModel& model, const EventSequence& seq);

// Batched training objective: NLL plus eta times the same integral terms
// evaluated under the null-type (zero-embedding) input at identical
// timestamps.
double objective(const NppModel& model, const Dataset& data, double eta);

struct TrainConfig {
  double learning_rate = 1e-3;
  int epochs = 30;
  int batch_size = 32;
  double eta = 1.0;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;
  bool select_best = true;
  int embed_dim = 64;
  int hidden_dim = 64;
  int num_basis = 0;          // 0 = size from gap percentiles
  double basis_max_mean = 0;  // 0 = size from gap percentiles
};

struct TrainResult {
  NppModel model;
  std::vector<double> train_objective;  // per-epoch sums over the train split
  std::vector<double> val_objective;
  int selected_epoch = -1;
  bool diverged = false;
};

TrainResult train(const Dataset& data, const TrainConfig& cfg);

}  // namespace gcause

#endif  // GCAUSE_NPP_HPP
