#pragma once

#include <string>

#include "kgpath/rng.hpp"
#include "kgpath/tape.hpp"

namespace kgpath {

// y = W x + b
struct Affine {
  Parameter* w = nullptr;  // {out, in}
  Parameter* b = nullptr;  // {out}

  static Affine create(ParamStore& store, Rng& rng, const std::string& prefix,
                       std::size_t out, std::size_t in);
  // W = I, b = 0 (requires out == in); the degenerate baseline used in tests.
  static Affine identity(ParamStore& store, const std::string& prefix,
                         std::size_t dim);
};

Var affine(Tape& tape, const Affine& layer, Var x);

// Two affine layers with a ReLU between them.
struct Mlp2 {
  Affine first;
  Affine second;

  static Mlp2 create(ParamStore& store, Rng& rng, const std::string& prefix,
                     std::size_t out, std::size_t hidden, std::size_t in);
  static Mlp2 identity(ParamStore& store, const std::string& prefix,
                       std::size_t dim);
};

Var mlp2(Tape& tape, const Mlp2& layer, Var x);

// Scaled dot-product multihead self/cross attention over row matrices.
// model_dim must divide evenly by heads; checked at construction.
struct MultiheadAttention {
  Parameter* wq = nullptr;  // {d, d}
  Parameter* wk = nullptr;
  Parameter* wv = nullptr;
  Parameter* wo = nullptr;
  std::size_t heads = 1;
  std::size_t model_dim = 0;

  static MultiheadAttention create(ParamStore& store, Rng& rng,
                                   const std::string& prefix,
                                   std::size_t model_dim, std::size_t heads);
};

// queries {Lq, d}, keys {Lk, d}, values {Lk, d} -> {Lq, d}
Var multihead_attention(Tape& tape, const MultiheadAttention& mha, Var queries,
                        Var keys, Var values);

// Rank-factorized trilinear form: out = sum_k (Ux)_k (Vv)_k (Tp)_k, which
// evaluates the full form sum_abc x_a v_b p_c W_abc with
// W_abc = sum_k U_ka V_kb T_kc.
struct TrilinearForm {
  Parameter* u = nullptr;  // {rank, dim}
  Parameter* v = nullptr;
  Parameter* t = nullptr;

  static TrilinearForm create(ParamStore& store, Rng& rng,
                              const std::string& prefix, std::size_t rank,
                              std::size_t dim);
};

Var trilinear_form(Tape& tape, const TrilinearForm& form, Var x, Var v, Var p);

// Dense cross-check path, practical for dim <= 16: w is {D,D,D}.
double trilinear_dense(const Tensor& x, const Tensor& v, const Tensor& p,
                       const Tensor& w);
// Expands factors into the dense {D,D,D} weight they represent.
Tensor trilinear_expand(const Tensor& u, const Tensor& v, const Tensor& t);

// a.b / (|a||b|); rejects zero-norm inputs.
Var cosine_similarity(Tape& tape, Var a, Var b);

// Initializers.
Tensor xavier_uniform(Rng& rng, std::size_t out, std::size_t in);
Tensor identity_matrix(std::size_t dim);

}  // namespace kgpath
