#include "kgpath/nn.hpp"

#include <cmath>

#include "kgpath/error.hpp"

namespace kgpath {

Tensor xavier_uniform(Rng& rng, std::size_t out, std::size_t in) {
  const double bound = std::sqrt(6.0 / static_cast<double>(out + in));
  Tensor t = Tensor::zeros({out, in});
  for (std::size_t i = 0; i < t.numel(); ++i) {
    t.at(i) = rng.uniform(-bound, bound);
  }
  return t;
}

Tensor identity_matrix(std::size_t dim) {
  Tensor t = Tensor::zeros({dim, dim});
  for (std::size_t i = 0; i < dim; ++i) t.at(i, i) = 1.0;
  return t;
}

Affine Affine::create(ParamStore& store, Rng& rng, const std::string& prefix,
                      std::size_t out, std::size_t in) {
  Affine layer;
  layer.w = &store.create(prefix + ".w", xavier_uniform(rng, out, in));
  layer.b = &store.create(prefix + ".b", Tensor::zeros({out}));
  return layer;
}

Affine Affine::identity(ParamStore& store, const std::string& prefix,
                        std::size_t dim) {
  Affine layer;
  layer.w = &store.create(prefix + ".w", identity_matrix(dim));
  layer.b = &store.create(prefix + ".b", Tensor::zeros({dim}));
  return layer;
}

Var affine(Tape& tape, const Affine& layer, Var x) {
  Var w = tape.param(*layer.w);
  Var b = tape.param(*layer.b);
  return tape.add(tape.matvec(w, x), b);
}

Mlp2 Mlp2::create(ParamStore& store, Rng& rng, const std::string& prefix,
                  std::size_t out, std::size_t hidden, std::size_t in) {
  Mlp2 m;
  m.first = Affine::create(store, rng, prefix + ".l1", hidden, in);
  m.second = Affine::create(store, rng, prefix + ".l2", out, hidden);
  return m;
}

Mlp2 Mlp2::identity(ParamStore& store, const std::string& prefix,
                    std::size_t dim) {
  Mlp2 m;
  m.first = Affine::identity(store, prefix + ".l1", dim);
  m.second = Affine::identity(store, prefix + ".l2", dim);
  return m;
}

Var mlp2(Tape& tape, const Mlp2& layer, Var x) {
  return affine(tape, layer.second, tape.relu(affine(tape, layer.first, x)));
}

MultiheadAttention MultiheadAttention::create(ParamStore& store, Rng& rng,
                                              const std::string& prefix,
                                              std::size_t model_dim,
                                              std::size_t heads) {
  if (heads == 0 || model_dim % heads != 0) {
    throw ConfigError(msg("multihead attention: model dim ", model_dim,
                          " not divisible by ", heads, " heads"));
  }
  MultiheadAttention mha;
  mha.heads = heads;
  mha.model_dim = model_dim;
  mha.wq = &store.create(prefix + ".wq", xavier_uniform(rng, model_dim, model_dim));
  mha.wk = &store.create(prefix + ".wk", xavier_uniform(rng, model_dim, model_dim));
  mha.wv = &store.create(prefix + ".wv", xavier_uniform(rng, model_dim, model_dim));
  mha.wo = &store.create(prefix + ".wo", xavier_uniform(rng, model_dim, model_dim));
  return mha;
}

Var multihead_attention(Tape& tape, const MultiheadAttention& mha, Var queries,
                        Var keys, Var values) {
  const Tensor& q = tape.value(queries);
  const Tensor& k = tape.value(keys);
  const Tensor& v = tape.value(values);
  if (q.rank() != 2 || k.rank() != 2 || v.rank() != 2 ||
      q.cols() != mha.model_dim || k.cols() != mha.model_dim ||
      v.cols() != mha.model_dim || k.rows() != v.rows()) {
    throw ShapeError(msg("multihead_attention: q ", q.shape_str(), " k ",
                         k.shape_str(), " v ", v.shape_str(), " model dim ",
                         mha.model_dim));
  }
  const std::size_t head_dim = mha.model_dim / mha.heads;

  Var pq = tape.matmul(queries, tape.transpose(tape.param(*mha.wq)));
  Var pk = tape.matmul(keys, tape.transpose(tape.param(*mha.wk)));
  Var pv = tape.matmul(values, tape.transpose(tape.param(*mha.wv)));

  std::vector<Var> head_rows;  // per query row, concatenated head outputs
  const std::size_t lq = q.rows();
  std::vector<std::vector<Var>> per_row(lq);

  for (std::size_t h = 0; h < mha.heads; ++h) {
    Var qh = tape.slice_cols(pq, h * head_dim, (h + 1) * head_dim);
    Var kh = tape.slice_cols(pk, h * head_dim, (h + 1) * head_dim);
    Var vh = tape.slice_cols(pv, h * head_dim, (h + 1) * head_dim);
    Var scores = tape.scale(tape.matmul(qh, tape.transpose(kh)),
                            1.0 / std::sqrt(static_cast<double>(head_dim)));
    Var weights = tape.softmax_rows(scores);   // {Lq, Lk}
    Var context = tape.matmul(weights, vh);    // {Lq, head_dim}
    for (std::size_t r = 0; r < lq; ++r) {
      per_row[r].push_back(tape.row(context, r));
    }
  }
  head_rows.reserve(lq);
  for (std::size_t r = 0; r < lq; ++r) {
    head_rows.push_back(tape.concat(per_row[r]));
  }
  Var merged = tape.stack_rows(head_rows);  // {Lq, model_dim}
  return tape.matmul(merged, tape.transpose(tape.param(*mha.wo)));
}

TrilinearForm TrilinearForm::create(ParamStore& store, Rng& rng,
                                    const std::string& prefix,
                                    std::size_t rank, std::size_t dim) {
  if (rank == 0) throw ConfigError("trilinear form: rank must be >= 1");
  TrilinearForm form;
  form.u = &store.create(prefix + ".u", xavier_uniform(rng, rank, dim));
  form.v = &store.create(prefix + ".v", xavier_uniform(rng, rank, dim));
  form.t = &store.create(prefix + ".t", xavier_uniform(rng, rank, dim));
  return form;
}

Var trilinear_form(Tape& tape, const TrilinearForm& form, Var x, Var v, Var p) {
  const Tensor& tx = tape.value(x);
  const Tensor& tv = tape.value(v);
  const Tensor& tp = tape.value(p);
  const std::size_t dim = form.u->value.cols();
  if (tx.numel() != dim || tv.numel() != dim || tp.numel() != dim) {
    throw ShapeError(msg("trilinear_form: inputs ", tx.shape_str(), " ",
                         tv.shape_str(), " ", tp.shape_str(), ", want {", dim,
                         "}"));
  }
  Var ux = tape.matvec(tape.param(*form.u), x);
  Var vv = tape.matvec(tape.param(*form.v), v);
  Var tp_ = tape.matvec(tape.param(*form.t), p);
  return tape.sum(tape.mul(tape.mul(ux, vv), tp_));
}

double trilinear_dense(const Tensor& x, const Tensor& v, const Tensor& p,
                       const Tensor& w) {
  if (w.rank() != 3 || x.rank() != 1 || v.rank() != 1 || p.rank() != 1) {
    throw ShapeError(msg("trilinear_dense: x ", x.shape_str(), " v ",
                         v.shape_str(), " p ", p.shape_str(), " w ",
                         w.shape_str()));
  }
  const std::size_t da = w.shape()[0], db = w.shape()[1], dc = w.shape()[2];
  if (x.numel() != da || v.numel() != db || p.numel() != dc) {
    throw ShapeError("trilinear_dense: dim mismatch");
  }
  double acc = 0.0;
  for (std::size_t a = 0; a < da; ++a) {
    for (std::size_t b = 0; b < db; ++b) {
      for (std::size_t c = 0; c < dc; ++c) {
        acc += x.at(a) * v.at(b) * p.at(c) * w.at((a * db + b) * dc + c);
      }
    }
  }
  return acc;
}

Tensor trilinear_expand(const Tensor& u, const Tensor& v, const Tensor& t) {
  const std::size_t rank = u.rows(), dim = u.cols();
  if (v.rows() != rank || t.rows() != rank || v.cols() != dim ||
      t.cols() != dim) {
    throw ShapeError("trilinear_expand: factor shapes disagree");
  }
  Tensor w = Tensor::zeros({dim, dim, dim});
  for (std::size_t k = 0; k < rank; ++k) {
    for (std::size_t a = 0; a < dim; ++a) {
      for (std::size_t b = 0; b < dim; ++b) {
        const double uv = u.at(k, a) * v.at(k, b);
        for (std::size_t c = 0; c < dim; ++c) {
          w.at((a * dim + b) * dim + c) += uv * t.at(k, c);
        }
      }
    }
  }
  return w;
}

Var cosine_similarity(Tape& tape, Var a, Var b) {
  const Tensor& ta = tape.value(a);
  const Tensor& tb = tape.value(b);
  if (!ta.same_shape(tb) || ta.rank() != 1) {
    throw ShapeError(msg("cosine_similarity: ", ta.shape_str(), " vs ",
                         tb.shape_str()));
  }
  if (l2_norm(ta) == 0.0 || l2_norm(tb) == 0.0) {
    throw Error("cosine_similarity: zero-norm vector");
  }
  Var num = tape.dot(a, b);
  Var denom = tape.mul(tape.sqrt(tape.dot(a, a)), tape.sqrt(tape.dot(b, b)));
  return tape.div(num, denom);
}

}  // namespace kgpath
