#include "layerlab/layerlab.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "layerlab/errors.hpp"
#include "layerlab/layer_potentials.hpp"
#include "layerlab/regularity_lab.hpp"

using namespace layerlab;

struct ll_operator {
  CoefficientVector coeffs;
  FundamentalSolution fs;
};

struct ll_surface {
  BoundarySurface surface;
};

struct ll_context {
  LayerContext ctx;
};

namespace {

thread_local std::string g_last_error;

ll_status fail(ll_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs body and converts exceptions into status codes.
template <class F>
ll_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return LL_OK;
  } catch (const Error& e) {
    return fail(static_cast<ll_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LL_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LL_INTERNAL, e.what());
  } catch (...) {
    return fail(LL_INTERNAL, "unknown exception");
  }
}

Vec3 point(const ll_operator* op, const double* x) {
  Vec3 p = Vec3::Zero();
  for (int k = 0; k < op->coeffs.n; ++k) p[k] = x[k];
  return p;
}

void put(double* out, cplx v) {
  out[0] = v.real();
  out[1] = v.imag();
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

ll_status ll_operator_from_json(const char* json, ll_operator** out) {
  if (!json || !out) return fail(LL_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    CoefficientVector c = coefficients_from_json(json);
    *out = new ll_operator{c, FundamentalSolution(c)};
  });
}

ll_status ll_operator_create(int n, size_t count, const int* gammas, const double* values, ll_operator** out) {
  if (!out || (count > 0 && (!gammas || !values))) return fail(LL_INVALID_ARGUMENT, "null argument");
  if (n != 2 && n != 3) return fail(LL_UNSUPPORTED_DIMENSION, "n must be 2 or 3");
  return guarded([&] {
    std::map<MultiIndex, cplx> m;
    for (size_t i = 0; i < count; ++i) {
      MultiIndex g(gammas + i * n, gammas + (i + 1) * n);
      if (m.count(g)) throw Error(ErrorCode::BadMultiIndex, "duplicate multi-index");
      m[g] = cplx(values[2 * i], values[2 * i + 1]);
    }
    CoefficientVector c = build_coefficients(n, m);
    *out = new ll_operator{c, FundamentalSolution(c)};
  });
}

void ll_operator_destroy(ll_operator* op) { delete op; }

ll_status ll_operator_ellipticity(const ll_operator* op, double* min_eigenvalue) {
  if (!op || !min_eigenvalue) return fail(LL_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *min_eigenvalue = check_ellipticity(op->coeffs); });
}

ll_status ll_eval_S(const ll_operator* op, const double* x, double* out) {
  if (!op || !x || !out) return fail(LL_INVALID_ARGUMENT, "null argument");
  return guarded([&] { put(out, op->fs.S(point(op, x))); });
}

ll_status ll_eval_gradS(const ll_operator* op, const double* x, double* out) {
  if (!op || !x || !out) return fail(LL_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    CVec3 g = op->fs.grad(point(op, x));
    for (int k = 0; k < op->coeffs.n; ++k) put(out + 2 * k, g[k]);
  });
}

ll_status ll_eval_hessS(const ll_operator* op, const double* x, double* out) {
  if (!op || !x || !out) return fail(LL_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    CMat3 h = op->fs.hess(point(op, x));
    const int n = op->coeffs.n;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) put(out + 2 * (r * n + c), h(r, c));
  });
}

ll_status ll_surface_from_json(const char* json, ll_surface** out) {
  if (!json || !out) return fail(LL_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new ll_surface{BoundarySurface::make(ShapeSpec::from_json(json))}; });
}

size_t ll_surface_node_count(const ll_surface* s) { return s ? s->surface.size() : 0; }

ll_status ll_surface_write_csv(const ll_surface* s, const char* path) {
  if (!s || !path) return fail(LL_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, std::string("cannot write ") + path);
    f << "index,x1,x2,x3,nu1,nu2,nu3,weight\n";
    char buf[512];
    for (std::size_t i = 0; i < s->surface.size(); ++i) {
      const BPoint& p = s->surface.node(i);
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, p.x[0], p.x[1], p.x[2],
                    p.nu[0], p.nu[1], p.nu[2], s->surface.weight(i));
      f << buf;
    }
    if (!f) throw Error(ErrorCode::Io, std::string("write failed: ") + path);
  });
}

void ll_surface_destroy(ll_surface* s) { delete s; }

ll_status ll_context_create(const ll_operator* op, const ll_surface* s, ll_context** out) {
  if (!op || !s || !out) return fail(LL_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (op->coeffs.n != s->surface.dim())
      throw Error(ErrorCode::UnsupportedDimension, "operator and surface dimensions differ");
    *out = new ll_context{LayerContext(op->coeffs, s->surface)};
  });
}

void ll_context_destroy(ll_context* ctx) { delete ctx; }

ll_status ll_apply(const ll_context* ctx, ll_layer_kind kind, const double* mu_re, const double* mu_im,
                   double* out_re, double* out_im) {
  if (!ctx || !mu_re || !out_re || !out_im) return fail(LL_INVALID_ARGUMENT, "null argument");
  if (kind < LL_SINGLE || kind > LL_CONORMAL_ADJOINT) return fail(LL_INVALID_ARGUMENT, "unknown layer kind");
  return guarded([&] {
    const BoundarySurface& s = ctx->ctx.surface();
    std::vector<cplx> mu(s.size());
    for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = cplx(mu_re[i], mu_im ? mu_im[i] : 0.0);
    std::vector<cplx> r = ctx->ctx.apply(static_cast<LayerKind>(kind), Density::nodal(s, mu));
    for (std::size_t i = 0; i < r.size(); ++i) {
      out_re[i] = r[i].real();
      out_im[i] = r[i].imag();
    }
  });
}

ll_status ll_run_experiment(const char* command, const char* config_json, const char* out_dir, int* all_pass,
                            char** report_json) {
  if (!command || !config_json) return fail(LL_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    ExperimentReport rep = run_experiment(command, config_json);
    if (out_dir) rep.write(out_dir);
    if (all_pass) *all_pass = rep.pass() ? 1 : 0;
    if (report_json) *report_json = dup_string(rep.to_json());
  });
}

void ll_string_free(char* s) { std::free(s); }

const char* ll_last_error_message(void) { return g_last_error.c_str(); }

const char* ll_status_string(ll_status status) {
  switch (status) {
    case LL_OK: return "Ok";
    case LL_INVALID_ARGUMENT: return "InvalidArgument";
    case LL_INTERNAL: return "Internal";
    default:
      if (status >= LL_NON_REAL_PRINCIPAL_PART && status <= LL_IO) return error_name(static_cast<ErrorCode>(status));
      return "Unknown";
  }
}

}  // extern "C"
