#pragma once

// Grid sweeps. Every sweep stores one result per node and reduces serially,
// so the parallel and serial paths return bit-identical values.

#include <cmath>
#include <exception>
#include <limits>
#include <vector>

#include <omp.h>

#include "cosym/error.hpp"

namespace cosym {

enum class Exec { Serial, Parallel };

struct ParamRect {
    double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
};

/// Tensor grid with nodes on both rectangle edges.
struct Grid {
    ParamRect rect;
    int nu = 64, nv = 64;

    double hu() const { return (rect.u1 - rect.u0) / (nu - 1); }
    double hv() const { return (rect.v1 - rect.v0) / (nv - 1); }
    double u(int i) const { return rect.u0 + i * hu(); }
    double v(int j) const { return rect.v0 + j * hv(); }
    int size() const { return nu * nv; }
    int index(int i, int j) const { return i * nv + j; }
};

/// Evaluates f(k) for k in [0, count). Exceptions are rethrown after the sweep,
/// lowest index first.
template <class R, class F>
std::vector<R> sweep(int count, F&& f, Exec exec = Exec::Parallel) {
    std::vector<R> out(count);
    std::vector<std::exception_ptr> errors(count);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (int k = 0; k < count; ++k) {
            try {
                out[k] = f(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    } else {
        for (int k = 0; k < count; ++k) {
            try {
                out[k] = f(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

struct ArgMax {
    double value = 0.0;
    int index = -1;
};

/// Largest value, lowest index on ties; NaN counts as larger than everything.
inline ArgMax arg_max(const std::vector<double>& vals) {
    ArgMax r;
    for (int k = 0; k < static_cast<int>(vals.size()); ++k) {
        const double x = vals[k];
        if (r.index < 0 || (std::isnan(x) && !std::isnan(r.value)) || x > r.value) {
            r.value = x;
            r.index = k;
        }
    }
    return r;
}

inline int thread_count() { return omp_get_max_threads(); }

}  // namespace cosym
