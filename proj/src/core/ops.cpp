// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/core/ops.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "moelab/core/error.h"
#include "moelab/core/rng.h"

namespace moelab::ops {

namespace {

using Node = detail::Node;
using BackwardFn = std::function<void(Node&)>;

Tensor make_result(Shape shape, std::vector<double> value, std::initializer_list<const Tensor*> inputs,
                   BackwardFn backward) {
    Tensor out(std::move(shape), std::move(value));
    Tape* tape = Tape::active();
    if (tape == nullptr) return out;
    bool needs = false;
    for (const auto* in : inputs) needs = needs || in->requires_grad();
    if (!needs) return out;
    const auto& node = out.node();
    node->requires_grad = true;
    for (const auto* in : inputs) node->parents.push_back(in->node());
    node->backward = std::move(backward);
    tape->record(node);
    return out;
}

Tensor make_result(Shape shape, std::vector<double> value, std::span<const Tensor> inputs, BackwardFn backward) {
    Tensor out(std::move(shape), std::move(value));
    Tape* tape = Tape::active();
    if (tape == nullptr) return out;
    const bool needs = std::any_of(inputs.begin(), inputs.end(), [](const Tensor& t) { return t.requires_grad(); });
    if (!needs) return out;
    const auto& node = out.node();
    node->requires_grad = true;
    for (const auto& in : inputs) node->parents.push_back(in.node());
    node->backward = std::move(backward);
    tape->record(node);
    return out;
}

// Parent i, if it takes gradients.
Node* grad_target(Node& self, std::size_t i) {
    auto& p = self.parents[i];
    return p->requires_grad ? p.get() : nullptr;
}

void require_matrix(const Tensor& t, const char* op) {
    if (t.rank() != 2) throw DimensionError(std::string(op) + ": expected a matrix, got " + shape_str(t.shape()));
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (a.shape() != b.shape()) {
        throw DimensionError(std::string(op) + ": shapes differ: " + shape_str(a.shape()) + " vs " +
                             shape_str(b.shape()));
    }
}

void require_finite(std::span<const double> values, const char* op) {
    for (double v : values) {
        if (!std::isfinite(v)) throw NumericError(std::string(op) + ": non-finite input");
    }
}

std::size_t last_dim(const Tensor& t) { return t.rank() == 0 ? 1 : t.shape().back(); }

} // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.shape()[1] != b.shape()[0]) {
        throw DimensionError("matmul: incompatible shapes " + shape_str(a.shape()) + " and " + shape_str(b.shape()));
    }
    const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
    const auto av = a.values();
    const auto bv = b.values();
    std::vector<double> c(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = av[i * k + p];
            if (aip == 0.0) continue;
            const double* brow = &bv[p * n];
            double* crow = &c[i * n];
            for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
    return make_result({m, n}, std::move(c), {&a, &b}, [m, k, n](Node& self) {
        const auto& A = self.parents[0]->value;
        const auto& B = self.parents[1]->value;
        const auto& dc = self.grad;
        if (auto* pa = grad_target(self, 0)) {
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t p = 0; p < k; ++p) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < n; ++j) acc += dc[i * n + j] * B[p * n + j];
                    pa->grad[i * k + p] += acc;
                }
            }
        }
        if (auto* pb = grad_target(self, 1)) {
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t p = 0; p < k; ++p) {
                    const double aip = A[i * k + p];
                    if (aip == 0.0) continue;
                    for (std::size_t j = 0; j < n; ++j) pb->grad[p * n + j] += aip * dc[i * n + j];
                }
            }
        }
    });
}

Tensor transpose(const Tensor& a) {
    require_matrix(a, "transpose");
    const std::size_t m = a.shape()[0], n = a.shape()[1];
    const auto av = a.values();
    std::vector<double> out(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[j * m + i] = av[i * n + j];
    return make_result({n, m}, std::move(out), {&a}, [m, n](Node& self) {
        auto* pa = grad_target(self, 0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) pa->grad[i * n + j] += self.grad[j * m + i];
    });
}

Tensor add(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "add");
    std::vector<double> out(a.values().begin(), a.values().end());
    const auto bv = b.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
    return make_result(a.shape(), std::move(out), {&a, &b}, [](Node& self) {
        for (std::size_t k = 0; k < 2; ++k) {
            if (auto* p = grad_target(self, k)) {
                for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i];
            }
        }
    });
}

Tensor sub(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "sub");
    std::vector<double> out(a.values().begin(), a.values().end());
    const auto bv = b.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
    return make_result(a.shape(), std::move(out), {&a, &b}, [](Node& self) {
        if (auto* p = grad_target(self, 0))
            for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i];
        if (auto* p = grad_target(self, 1))
            for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] -= self.grad[i];
    });
}

Tensor mul(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "mul");
    std::vector<double> out(a.values().begin(), a.values().end());
    const auto bv = b.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
    return make_result(a.shape(), std::move(out), {&a, &b}, [](Node& self) {
        const auto& A = self.parents[0]->value;
        const auto& B = self.parents[1]->value;
        if (auto* p = grad_target(self, 0))
            for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i] * B[i];
        if (auto* p = grad_target(self, 1))
            for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i] * A[i];
    });
}

Tensor scale(const Tensor& a, double factor) {
    std::vector<double> out(a.values().begin(), a.values().end());
    for (auto& v : out) v *= factor;
    return make_result(a.shape(), std::move(out), {&a}, [factor](Node& self) {
        auto* p = grad_target(self, 0);
        for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i] * factor;
    });
}

Tensor reciprocal(const Tensor& a) {
    std::vector<double> out(a.values().begin(), a.values().end());
    for (auto& v : out) {
        if (v == 0.0) throw NumericError("reciprocal: division by zero");
        v = 1.0 / v;
    }
    return make_result(a.shape(), out, {&a}, [out](Node& self) {
        auto* p = grad_target(self, 0);
        for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] -= self.grad[i] * out[i] * out[i];
    });
}

Tensor gelu(const Tensor& x) {
    const auto xv = x.values();
    std::vector<double> out(xv.size());
    for (std::size_t i = 0; i < xv.size(); ++i) out[i] = 0.5 * xv[i] * (1.0 + std::erf(xv[i] * std::numbers::sqrt2 / 2.0));
    return make_result(x.shape(), std::move(out), {&x}, [](Node& self) {
        auto* p = grad_target(self, 0);
        const auto& X = self.parents[0]->value;
        const double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
            const double v = X[i];
            const double cdf = 0.5 * (1.0 + std::erf(v * std::numbers::sqrt2 / 2.0));
            const double pdf = inv_sqrt_2pi * std::exp(-0.5 * v * v);
            p->grad[i] += self.grad[i] * (cdf + v * pdf);
        }
    });
}

Tensor add_bias(const Tensor& a, const Tensor& bias) {
    const std::size_t n = last_dim(a);
    if (bias.rank() != 1 || bias.size() != n) {
        throw DimensionError("add_bias: bias " + shape_str(bias.shape()) + " does not match last axis of " +
                             shape_str(a.shape()));
    }
    std::vector<double> out(a.values().begin(), a.values().end());
    const auto bv = bias.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i % n];
    return make_result(a.shape(), std::move(out), {&a, &bias}, [n](Node& self) {
        if (auto* p = grad_target(self, 0))
            for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i];
        if (auto* p = grad_target(self, 1))
            for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i % n] += self.grad[i];
    });
}

Tensor scale_rows(const Tensor& x, const Tensor& s) {
    require_matrix(x, "scale_rows");
    const std::size_t m = x.shape()[0], n = x.shape()[1];
    if (s.size() != m || s.rank() != 1) {
        throw DimensionError("scale_rows: scale " + shape_str(s.shape()) + " does not match rows of " +
                             shape_str(x.shape()));
    }
    const auto xv = x.values();
    const auto sv = s.values();
    std::vector<double> out(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i * n + j] = xv[i * n + j] * sv[i];
    return make_result({m, n}, std::move(out), {&x, &s}, [m, n](Node& self) {
        const auto& X = self.parents[0]->value;
        const auto& S = self.parents[1]->value;
        if (auto* p = grad_target(self, 0))
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j) p->grad[i * n + j] += self.grad[i * n + j] * S[i];
        if (auto* p = grad_target(self, 1))
            for (std::size_t i = 0; i < m; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += self.grad[i * n + j] * X[i * n + j];
                p->grad[i] += acc;
            }
    });
}

Tensor sum(const Tensor& a) {
    double total = 0.0;
    for (double v : a.values()) total += v;
    return make_result({}, {total}, {&a}, [](Node& self) {
        auto* p = grad_target(self, 0);
        for (auto& g : p->grad) g += self.grad[0];
    });
}

Tensor mean(const Tensor& a) { return scale(sum(a), 1.0 / static_cast<double>(a.size())); }

Tensor sum_rows(const Tensor& x) {
    require_matrix(x, "sum_rows");
    const std::size_t m = x.shape()[0], n = x.shape()[1];
    const auto xv = x.values();
    std::vector<double> out(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i] += xv[i * n + j];
    return make_result({m}, std::move(out), {&x}, [m, n](Node& self) {
        auto* p = grad_target(self, 0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) p->grad[i * n + j] += self.grad[i];
    });
}

Tensor mean_rows(const Tensor& x) {
    require_matrix(x, "mean_rows");
    const std::size_t m = x.shape()[0], n = x.shape()[1];
    const auto xv = x.values();
    const double inv = 1.0 / static_cast<double>(m);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[j] += xv[i * n + j];
    for (auto& v : out) v *= inv;
    return make_result({n}, std::move(out), {&x}, [m, n, inv](Node& self) {
        auto* p = grad_target(self, 0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) p->grad[i * n + j] += self.grad[j] * inv;
    });
}

Tensor softmax(const Tensor& x, std::size_t axis) {
    const auto& shape = x.shape();
    if (axis >= shape.size()) {
        throw DimensionError("softmax: axis " + std::to_string(axis) + " out of range for " + shape_str(shape));
    }
    const auto xv = x.values();
    require_finite(xv, "softmax");
    std::size_t outer = 1, inner = 1;
    for (std::size_t i = 0; i < axis; ++i) outer *= shape[i];
    for (std::size_t i = axis + 1; i < shape.size(); ++i) inner *= shape[i];
    const std::size_t n = shape[axis];
    std::vector<double> out(xv.size());
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < inner; ++in) {
            const std::size_t base = o * n * inner + in;
            double mx = xv[base];
            for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, xv[base + j * inner]);
            double z = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double e = std::exp(xv[base + j * inner] - mx);
                out[base + j * inner] = e;
                z += e;
            }
            for (std::size_t j = 0; j < n; ++j) out[base + j * inner] /= z;
        }
    }
    return make_result(shape, out, {&x}, [out, outer, inner, n](Node& self) {
        auto* p = grad_target(self, 0);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t in = 0; in < inner; ++in) {
                const std::size_t base = o * n * inner + in;
                double dot = 0.0;
                for (std::size_t j = 0; j < n; ++j) dot += self.grad[base + j * inner] * out[base + j * inner];
                for (std::size_t j = 0; j < n; ++j) {
                    const std::size_t idx = base + j * inner;
                    p->grad[idx] += out[idx] * (self.grad[idx] - dot);
                }
            }
        }
    });
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
    const std::size_t n = last_dim(x);
    if (gain.rank() != 1 || gain.size() != n || bias.rank() != 1 || bias.size() != n) {
        throw DimensionError("layer_norm: gain " + shape_str(gain.shape()) + " / bias " + shape_str(bias.shape()) +
                             " do not match last axis of " + shape_str(x.shape()));
    }
    const std::size_t rows = x.size() / n;
    const auto xv = x.values();
    const auto gv = gain.values();
    const auto bv = bias.values();
    std::vector<double> xhat(xv.size()), rstd(rows), out(xv.size());
    for (std::size_t r = 0; r < rows; ++r) {
        double mu = 0.0;
        for (std::size_t j = 0; j < n; ++j) mu += xv[r * n + j];
        mu /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = xv[r * n + j] - mu;
            var += d * d;
        }
        var /= static_cast<double>(n);
        rstd[r] = 1.0 / std::sqrt(var + eps);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t i = r * n + j;
            xhat[i] = (xv[i] - mu) * rstd[r];
            out[i] = xhat[i] * gv[j] + bv[j];
        }
    }
    return make_result(x.shape(), std::move(out), {&x, &gain, &bias},
                       [xhat = std::move(xhat), rstd = std::move(rstd), rows, n](Node& self) {
                           const auto& G = self.parents[1]->value;
                           if (auto* px = grad_target(self, 0)) {
                               for (std::size_t r = 0; r < rows; ++r) {
                                   double mean_d = 0.0, mean_dx = 0.0;
                                   for (std::size_t j = 0; j < n; ++j) {
                                       const std::size_t i = r * n + j;
                                       const double d = self.grad[i] * G[j];
                                       mean_d += d;
                                       mean_dx += d * xhat[i];
                                   }
                                   mean_d /= static_cast<double>(n);
                                   mean_dx /= static_cast<double>(n);
                                   for (std::size_t j = 0; j < n; ++j) {
                                       const std::size_t i = r * n + j;
                                       const double d = self.grad[i] * G[j];
                                       px->grad[i] += rstd[r] * (d - mean_d - xhat[i] * mean_dx);
                                   }
                               }
                           }
                           if (auto* pg = grad_target(self, 1))
                               for (std::size_t i = 0; i < self.grad.size(); ++i) pg->grad[i % n] += self.grad[i] * xhat[i];
                           if (auto* pb = grad_target(self, 2))
                               for (std::size_t i = 0; i < self.grad.size(); ++i) pb->grad[i % n] += self.grad[i];
                       });
}

Tensor cross_entropy(const Tensor& logits, std::size_t target) {
    if (logits.rank() != 1) throw DimensionError("cross_entropy: expected 1-D logits, got " + shape_str(logits.shape()));
    const std::size_t n = logits.size();
    if (target >= n) {
        throw IndexError("cross_entropy: target " + std::to_string(target) + " out of range for " + std::to_string(n) +
                         " classes");
    }
    const auto xv = logits.values();
    require_finite(xv, "cross_entropy");
    const double mx = *std::max_element(xv.begin(), xv.end());
    double z = 0.0;
    for (double v : xv) z += std::exp(v - mx);
    const double lse = mx + std::log(z);
    std::vector<double> probs(n);
    for (std::size_t i = 0; i < n; ++i) probs[i] = std::exp(xv[i] - lse);
    return make_result({}, {lse - xv[target]}, {&logits}, [probs = std::move(probs), target](Node& self) {
        auto* p = grad_target(self, 0);
        for (std::size_t i = 0; i < probs.size(); ++i) {
            p->grad[i] += self.grad[0] * (probs[i] - (i == target ? 1.0 : 0.0));
        }
    });
}

Tensor reshape(const Tensor& x, Shape shape) {
    if (shape_size(shape) != x.size()) {
        throw DimensionError("reshape: cannot view " + shape_str(x.shape()) + " as " + shape_str(shape));
    }
    return make_result(std::move(shape), std::vector<double>(x.values().begin(), x.values().end()), {&x},
                       [](Node& self) {
                           auto* p = grad_target(self, 0);
                           for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i];
                       });
}

Tensor embed(std::span<const std::size_t> ids, const Tensor& table) {
    require_matrix(table, "embed");
    if (ids.empty()) throw ContractError("embed: empty id sequence");
    const std::size_t vocab = table.shape()[0];
    for (auto id : ids) {
        if (id >= vocab) {
            throw IndexError("embed: id " + std::to_string(id) + " out of range for table of " + std::to_string(vocab) +
                             " rows");
        }
    }
    return gather_rows(table, ids);
}

Tensor gather_rows(const Tensor& x, std::span<const std::size_t> rows) {
    require_matrix(x, "gather_rows");
    if (rows.empty()) throw DimensionError("gather_rows: empty row selection from " + shape_str(x.shape()));
    const std::size_t m = x.shape()[0], n = x.shape()[1];
    const auto xv = x.values();
    std::vector<double> out(rows.size() * n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= m) throw IndexError("gather_rows: row " + std::to_string(rows[i]) + " of " + shape_str(x.shape()));
        std::copy_n(&xv[rows[i] * n], n, &out[i * n]);
    }
    std::vector<std::size_t> idx(rows.begin(), rows.end());
    return make_result({rows.size(), n}, std::move(out), {&x}, [idx = std::move(idx), n](Node& self) {
        auto* p = grad_target(self, 0);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) p->grad[idx[i] * n + j] += self.grad[i * n + j];
    });
}

Tensor scatter_add_rows(const Tensor& base, const Tensor& src, std::span<const std::size_t> rows) {
    require_matrix(base, "scatter_add_rows");
    require_matrix(src, "scatter_add_rows");
    const std::size_t m = base.shape()[0], n = base.shape()[1];
    if (src.shape()[1] != n || src.shape()[0] != rows.size()) {
        throw DimensionError("scatter_add_rows: source " + shape_str(src.shape()) + " vs base " +
                             shape_str(base.shape()) + " with " + std::to_string(rows.size()) + " rows");
    }
    std::vector<double> out(base.values().begin(), base.values().end());
    const auto sv = src.values();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= m) throw IndexError("scatter_add_rows: row " + std::to_string(rows[i]) + " of " + shape_str(base.shape()));
        for (std::size_t j = 0; j < n; ++j) out[rows[i] * n + j] += sv[i * n + j];
    }
    std::vector<std::size_t> idx(rows.begin(), rows.end());
    return make_result({m, n}, std::move(out), {&base, &src}, [idx = std::move(idx), n](Node& self) {
        if (auto* p = grad_target(self, 0))
            for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i];
        if (auto* p = grad_target(self, 1))
            for (std::size_t i = 0; i < idx.size(); ++i)
                for (std::size_t j = 0; j < n; ++j) p->grad[i * n + j] += self.grad[idx[i] * n + j];
    });
}

Tensor slice_rows(const Tensor& x, std::size_t begin, std::size_t end) {
    require_matrix(x, "slice_rows");
    const std::size_t m = x.shape()[0], n = x.shape()[1];
    if (begin >= end || end > m) {
        throw DimensionError("slice_rows: [" + std::to_string(begin) + "," + std::to_string(end) + ") of " +
                             shape_str(x.shape()));
    }
    const auto xv = x.values();
    std::vector<double> out(xv.begin() + static_cast<std::ptrdiff_t>(begin * n),
                            xv.begin() + static_cast<std::ptrdiff_t>(end * n));
    return make_result({end - begin, n}, std::move(out), {&x}, [begin, n](Node& self) {
        auto* p = grad_target(self, 0);
        for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[begin * n + i] += self.grad[i];
    });
}

Tensor slice_cols(const Tensor& x, std::size_t begin, std::size_t end) {
    require_matrix(x, "slice_cols");
    const std::size_t m = x.shape()[0], n = x.shape()[1];
    if (begin >= end || end > n) {
        throw DimensionError("slice_cols: [" + std::to_string(begin) + "," + std::to_string(end) + ") of " +
                             shape_str(x.shape()));
    }
    const std::size_t w = end - begin;
    const auto xv = x.values();
    std::vector<double> out(m * w);
    for (std::size_t i = 0; i < m; ++i) std::copy_n(&xv[i * n + begin], w, &out[i * w]);
    return make_result({m, w}, std::move(out), {&x}, [m, n, w, begin](Node& self) {
        auto* p = grad_target(self, 0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < w; ++j) p->grad[i * n + begin + j] += self.grad[i * w + j];
    });
}

Tensor concat_rows(std::span<const Tensor> parts) {
    if (parts.empty()) throw DimensionError("concat_rows: no inputs");
    const std::size_t n = parts[0].cols();
    std::size_t m = 0;
    for (const auto& p : parts) {
        if (p.rank() != 2 || p.shape()[1] != n) {
            throw DimensionError("concat_rows: " + shape_str(p.shape()) + " does not have " + std::to_string(n) + " columns");
        }
        m += p.shape()[0];
    }
    std::vector<double> out;
    out.reserve(m * n);
    std::vector<std::size_t> offsets;
    for (const auto& p : parts) {
        offsets.push_back(out.size());
        out.insert(out.end(), p.values().begin(), p.values().end());
    }
    return make_result({m, n}, std::move(out), parts, [offsets = std::move(offsets)](Node& self) {
        for (std::size_t k = 0; k < self.parents.size(); ++k) {
            if (auto* p = grad_target(self, k))
                for (std::size_t i = 0; i < p->grad.size(); ++i) p->grad[i] += self.grad[offsets[k] + i];
        }
    });
}

Tensor concat_cols(std::span<const Tensor> parts) {
    if (parts.empty()) throw DimensionError("concat_cols: no inputs");
    const std::size_t m = parts[0].rows();
    std::size_t n = 0;
    std::vector<std::size_t> offsets, widths;
    for (const auto& p : parts) {
        if (p.rank() != 2 || p.shape()[0] != m) {
            throw DimensionError("concat_cols: " + shape_str(p.shape()) + " does not have " + std::to_string(m) + " rows");
        }
        offsets.push_back(n);
        widths.push_back(p.shape()[1]);
        n += p.shape()[1];
    }
    std::vector<double> out(m * n);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const auto pv = parts[k].values();
        for (std::size_t i = 0; i < m; ++i) std::copy_n(&pv[i * widths[k]], widths[k], &out[i * n + offsets[k]]);
    }
    return make_result({m, n}, std::move(out), parts,
                       [offsets = std::move(offsets), widths = std::move(widths), m, n](Node& self) {
                           for (std::size_t k = 0; k < self.parents.size(); ++k) {
                               auto* p = grad_target(self, k);
                               if (!p) continue;
                               for (std::size_t i = 0; i < m; ++i)
                                   for (std::size_t j = 0; j < widths[k]; ++j)
                                       p->grad[i * widths[k] + j] += self.grad[i * n + offsets[k] + j];
                           }
                       });
}

Tensor gather_elements(const Tensor& x, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
    require_matrix(x, "gather_elements");
    if (rows.size() != cols.size() || rows.empty()) {
        throw DimensionError("gather_elements: " + std::to_string(rows.size()) + " rows vs " +
                             std::to_string(cols.size()) + " cols");
    }
    const std::size_t m = x.shape()[0], n = x.shape()[1];
    const auto xv = x.values();
    std::vector<std::size_t> flat(rows.size());
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= m || cols[i] >= n) throw IndexError("gather_elements: index outside " + shape_str(x.shape()));
        flat[i] = rows[i] * n + cols[i];
        out[i] = xv[flat[i]];
    }
    return make_result({rows.size()}, std::move(out), {&x}, [flat = std::move(flat)](Node& self) {
        auto* p = grad_target(self, 0);
        for (std::size_t i = 0; i < flat.size(); ++i) p->grad[flat[i]] += self.grad[i];
    });
}

Tensor scatter_elements(const Tensor& src, std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                        std::size_t n_rows, std::size_t n_cols) {
    if (src.rank() != 1 || src.size() != rows.size() || rows.size() != cols.size()) {
        throw DimensionError("scatter_elements: source " + shape_str(src.shape()) + " with " +
                             std::to_string(rows.size()) + " indices");
    }
    const auto sv = src.values();
    std::vector<double> out(n_rows * n_cols, 0.0);
    std::vector<std::size_t> flat(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= n_rows || cols[i] >= n_cols) throw IndexError("scatter_elements: index outside target");
        flat[i] = rows[i] * n_cols + cols[i];
        out[flat[i]] += sv[i];
    }
    return make_result({n_rows, n_cols}, std::move(out), {&src}, [flat = std::move(flat)](Node& self) {
        auto* p = grad_target(self, 0);
        for (std::size_t i = 0; i < flat.size(); ++i) p->grad[i] += self.grad[flat[i]];
    });
}

Tensor dropout(const Tensor& x, double p, Rng& rng) {
    if (p < 0.0 || p >= 1.0) throw ConfigError("dropout probability must be in [0, 1)");
    if (p == 0.0) return x;
    const double keep = 1.0 - p;
    std::vector<double> mask(x.size());
    for (auto& m : mask) m = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
    std::vector<double> out(x.values().begin(), x.values().end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
    return make_result(x.shape(), std::move(out), {&x}, [mask = std::move(mask)](Node& self) {
        auto* p = grad_target(self, 0);
        for (std::size_t i = 0; i < mask.size(); ++i) p->grad[i] += self.grad[i] * mask[i];
    });
}

} // namespace moelab::ops
