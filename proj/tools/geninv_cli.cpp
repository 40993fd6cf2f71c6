// Copyright 2026 The geninv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// geninv command-line front end.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geninv/geninv.hpp"

namespace {

using geninv::DenseMatrix;
using geninv::IndexList;
using json = nlohmann::ordered_json;

constexpr std::size_t inline_limit = 12;

// Bad flag values. Reported like parse errors (exit 1).
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Classification below the level asked for with --require.
class CheckFailed : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string input;
    std::string second_input;
    std::string c_file;
    std::string r_file;
    std::string p_file;
    std::string q_file;
    std::string signal_file;
    std::string method;
    std::string sketch;
    std::string rows;
    std::string cols;
    std::string pairs;
    std::string triples;
    std::string estimate = "exact";
    std::string require = "one_inverse";
    std::string out;
    std::string out_p;
    std::string out_q;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<std::size_t> p;
    std::optional<std::size_t> q;
    std::optional<std::size_t> nodes;
    bool all = false;
    bool one_based = false;
    bool json_output = false;
};

// ---------------------------------------------------------------------------
// Input helpers
// ---------------------------------------------------------------------------

struct Loaded {
    DenseMatrix A;
    json info;
};

json file_info(const std::string& path, const std::string& bytes) {
    return json{{"path", path}, {"digest", geninv::fnv1a_hex(bytes)}};
}

Loaded load_matrix(const std::string& path) {
    const std::string text = geninv::read_file(path);
    Loaded out;
    try {
        out.A = geninv::parse_matrix(text, geninv::guess_format(path, text));
    } catch (const geninv::ParseError& e) {
        throw geninv::ParseError(e.detail(), e.line(), path);
    }
    out.info = file_info(path, text);
    out.info["rows"] = out.A.rows();
    out.info["cols"] = out.A.cols();
    return out;
}

std::size_t parse_index(std::string_view tok, bool one_based, const std::string& flag) {
    std::size_t v = 0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (tok.empty() || ec != std::errc() || ptr != end) {
        throw UsageError(flag + ": bad index '" + std::string(tok) + "'");
    }
    if (one_based) {
        if (v == 0) {
            throw UsageError(flag + ": index 0 with --one-based");
        }
        --v;
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t k = s.find(sep, start);
        out.push_back(geninv::detail::trim(s.substr(start, k == s.npos ? s.npos : k - start)));
        if (k == s.npos) {
            return out;
        }
        start = k + 1;
    }
}

IndexList parse_index_list(const std::string& s, bool one_based, const std::string& flag) {
    IndexList out;
    for (std::string_view tok : split(s, ',')) {
        out.push_back(parse_index(tok, one_based, flag));
    }
    return out;
}

// "i,j;k,l" with `arity` indices per group
std::vector<IndexList> parse_groups(const std::string& s, std::size_t arity, bool one_based, const std::string& flag) {
    std::vector<IndexList> out;
    for (std::string_view group : split(s, ';')) {
        if (group.empty()) {
            continue;
        }
        IndexList g;
        for (std::string_view tok : split(group, ',')) {
            g.push_back(parse_index(tok, one_based, flag));
        }
        if (g.size() != arity) {
            throw UsageError(flag + ": expected " + std::to_string(arity) + " indices in '" + std::string(group) + "'");
        }
        out.push_back(std::move(g));
    }
    if (out.empty()) {
        throw UsageError(flag + ": empty list");
    }
    return out;
}

std::optional<std::uint64_t> resolve_seed(const Options& o) {
    if (o.seed) {
        return o.seed;
    }
    const char* env = std::getenv("GENINV_SEED");
    if (env == nullptr || *env == '\0') {
        return std::nullopt;
    }
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw UsageError("GENINV_SEED is not an unsigned integer: '" + std::string(s) + "'");
    }
    return v;
}

geninv::Tolerance rank_tolerance(const Options& o) {
    return o.tol ? geninv::Tolerance::absolute(*o.tol) : geninv::Tolerance::automatic();
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

class Reporter {
  public:
    Reporter(const Options& o, std::string command) : opts_(o) {
        report_["schema"] = 1;
        report_["command"] = std::move(command);
    }

    json& root() { return report_; }

    void input(const std::string& name, json info) { report_["inputs"][name] = std::move(info); }

    /// Inline small matrices; write larger ones next to --out or into the
    /// working directory.
    void matrix(const std::string& name, const DenseMatrix& M, bool primary = false) {
        json j{{"rows", M.rows()}, {"cols", M.cols()}};
        std::string path;
        if (primary && !opts_.out.empty()) {
            path = opts_.out;
        } else if (M.rows() > inline_limit || M.cols() > inline_limit) {
            path = opts_.out.empty() ? "geninv-" + report_["command"].get<std::string>() + "-" + name + ".mtx"
                                     : opts_.out + "." + name + ".mtx";
        }
        if (!path.empty()) {
            write(path, M);
            j["path"] = path;
        }
        if (M.rows() <= inline_limit && M.cols() <= inline_limit) {
            json rows = json::array();
            for (std::size_t i = 0; i < M.rows(); ++i) {
                json row = json::array();
                for (std::size_t k = 0; k < M.cols(); ++k) {
                    row.push_back(M(i, k));
                }
                rows.push_back(std::move(row));
            }
            j["data"] = std::move(rows);
        }
        report_["outputs"][name] = std::move(j);
        shown_.emplace_back(name, M);
    }

    void penrose(const geninv::PenroseReport& r) {
        report_["residuals"] = json{{"r1", r.r1},
                                    {"r2", r.r2},
                                    {"r3", r.r3},
                                    {"r4", r.r4},
                                    {"tolerance", r.tolerance},
                                    {"classification", std::string(geninv::to_string(r.classification))}};
    }

    void seed(std::optional<std::uint64_t> s) {
        report_["seed"] = s ? json(*s) : json(nullptr);
    }

    void finish(double elapsed_ms) {
        report_["timing_ms"] = elapsed_ms;
        if (opts_.json_output) {
            std::cout << report_.dump(2) << '\n';
            return;
        }
        print_text();
    }

  private:
    void write(const std::string& path, const DenseMatrix& M) const {
        geninv::MatrixFormat f = geninv::guess_format(path, "");
        if (!opts_.format.empty()) {
            const auto parsed = geninv::matrix_format_from_string(opts_.format);
            if (!parsed) {
                throw UsageError("--format: expected mm or csv, got '" + opts_.format + "'");
            }
            f = *parsed;
        }
        geninv::write_matrix(path, M, f);
    }

    void print_text() const {
        for (const auto& [name, M] : shown_) {
            std::printf("%s (%zux%zu)\n", name.c_str(), M.rows(), M.cols());
            if (M.rows() > inline_limit || M.cols() > inline_limit) {
                std::printf("  written to %s\n", report_["outputs"][name]["path"].get<std::string>().c_str());
                continue;
            }
            for (std::size_t i = 0; i < M.rows(); ++i) {
                std::printf(" ");
                for (std::size_t k = 0; k < M.cols(); ++k) {
                    std::printf(" %.17g", M(i, k));
                }
                std::printf("\n");
            }
        }
        for (const auto& [key, value] : report_.items()) {
            if (key == "schema" || key == "command" || key == "inputs" || key == "outputs") {
                continue;
            }
            std::printf("%s: %s\n", key.c_str(), value.dump().c_str());
        }
    }

    const Options& opts_;
    json report_;
    std::vector<std::pair<std::string, DenseMatrix>> shown_;
};

class Timer {
  public:
    [[nodiscard]] double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json index_json(const IndexList& idx, bool one_based) {
    json a = json::array();
    for (std::size_t i : idx) {
        a.push_back(i + (one_based ? 1 : 0));
    }
    return a;
}

// ---------------------------------------------------------------------------
// Sketches
// ---------------------------------------------------------------------------

struct SketchChoice {
    geninv::SketchPair pair;
    json info;
};

SketchChoice build_sketch(const DenseMatrix& A, const Options& o, Reporter& rep, geninv::SketchKind fallback,
                          std::size_t default_p, std::size_t default_q) {
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    SketchChoice out;
    if (!o.p_file.empty() || !o.q_file.empty()) {
        if (o.p_file.empty() || o.q_file.empty()) {
            throw UsageError("--P and --Q must be given together");
        }
        Loaded P = load_matrix(o.p_file);
        Loaded Q = load_matrix(o.q_file);
        rep.input("P", P.info);
        rep.input("Q", Q.info);
        out.pair = geninv::make_user_sketch(std::move(P.A), std::move(Q.A));
    } else {
        geninv::SketchKind kind = fallback;
        if (!o.sketch.empty()) {
            const auto parsed = geninv::sketch_kind_from_string(o.sketch);
            if (!parsed || *parsed == geninv::SketchKind::user) {
                throw UsageError("--sketch: expected gaussian, orthonormal or column_select, got '" + o.sketch + "'");
            }
            kind = *parsed;
        }
        if (!o.rows.empty() || !o.cols.empty()) {
            kind = geninv::SketchKind::column_select;
        }
        geninv::SketchOptions so;
        so.kind = kind;
        so.m = m;
        so.n = n;
        so.p = o.p.value_or(default_p);
        so.q = o.q.value_or(default_q);
        so.seed = resolve_seed(o);
        if (kind == geninv::SketchKind::column_select && (!o.rows.empty() || !o.cols.empty())) {
            if (o.rows.empty() || o.cols.empty()) {
                throw UsageError("--rows and --cols must be given together");
            }
            so.rows = parse_index_list(o.rows, o.one_based, "--rows");
            so.cols = parse_index_list(o.cols, o.one_based, "--cols");
        }
        out.pair = geninv::make_sketch(so);
    }
    const geninv::SketchPair& s = out.pair;
    out.info = json{{"kind", std::string(geninv::to_string(s.kind))},
                    {"p", s.P.cols()},
                    {"q", s.Q.cols()},
                    {"seed", s.seed ? json(*s.seed) : json(nullptr)}};
    if (s.kind == geninv::SketchKind::column_select) {
        out.info["rows"] = index_json(s.row_indices, o.one_based);
        out.info["cols"] = index_json(s.col_indices, o.one_based);
    }
    return out;
}

json preservation_json(const geninv::RankPreservationReport& r) {
    return json{{"rank_A", r.rank_A}, {"rank_PTA", r.rank_PTA}, {"rank_AQ", r.rank_AQ}, {"preserved", r.preserved}};
}

std::size_t default_width(const DenseMatrix& A, std::size_t bound, geninv::Tolerance tol) {
    return std::min(bound, geninv::oversampled_width(geninv::numeric_rank(A, tol)));
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

void require_input(const Options& o, const char* what) {
    if (o.input.empty()) {
        throw UsageError(std::string("missing ") + what);
    }
}

int cmd_pinv(const Options& o) {
    Reporter rep(o, "pinv");
    const geninv::Tolerance tol = rank_tolerance(o);
    const std::string method = o.method.empty() ? "oracle" : o.method;
    rep.root()["method"] = method;

    DenseMatrix A;
    std::optional<geninv::CRFactorization> factors;
    if (!o.c_file.empty() || !o.r_file.empty()) {
        if (o.c_file.empty() || o.r_file.empty()) {
            throw UsageError("--C and --R must be given together");
        }
        Loaded C = load_matrix(o.c_file);
        Loaded R = load_matrix(o.r_file);
        rep.input("C", C.info);
        rep.input("R", R.info);
        if (C.A.cols() != R.A.rows()) {
            throw geninv::ShapeError("C is " + C.A.shape_string() + " but R is " + R.A.shape_string());
        }
        A = C.A * R.A;
        factors = geninv::CRFactorization{C.A, R.A, C.A.cols(), {}};
    } else {
        require_input(o, "input matrix");
        Loaded in = load_matrix(o.input);
        rep.input("A", in.info);
        A = std::move(in.A);
    }

    const Timer timer;
    DenseMatrix G;
    std::optional<std::uint64_t> seed;
    bool computed_factors = false;
    if (method == "oracle") {
        G = geninv::pinv_oracle(A, tol);
    } else if (method == "reverse_order" || method == "corrected" || method == "macduffee") {
        if (!factors) {
            factors = geninv::cr_factorize(A, tol);
            computed_factors = true;
        }
        if (method == "reverse_order") {
            G = geninv::pinv_reverse_order(factors->C, factors->R, tol);
        } else if (method == "corrected") {
            G = geninv::pinv_corrected(factors->C, factors->R, tol);
        } else {
            G = geninv::pinv_macduffee(*factors, tol);
        }
    } else if (method == "randomized" || method == "orthogonal") {
        const bool orth = method == "orthogonal";
        const SketchChoice s = build_sketch(A, o, rep,
                                            orth ? geninv::SketchKind::orthonormal : geninv::SketchKind::gaussian,
                                            orth ? A.rows() : default_width(A, A.rows(), tol),
                                            orth ? A.cols() : default_width(A, A.cols(), tol));
        seed = s.pair.seed;
        rep.root()["sketch"] = s.info;
        rep.root()["rank_preservation"] = preservation_json(geninv::check_rank_preservation(A, s.pair, tol));
        G = orth ? geninv::pinv_orthogonal_sketch(A, s.pair, tol) : geninv::pinv_randomized(A, s.pair, tol);
    } else {
        throw UsageError("--method: unknown pinv method '" + method + "'");
    }
    const double elapsed = timer.ms();
    rep.matrix("result", G, true);
    if (computed_factors) {
        rep.root()["factor_rank"] = factors->rank;
        rep.matrix("C", factors->C);
        rep.matrix("R", factors->R);
    }
    rep.penrose(geninv::verify_penrose(A, G));
    rep.seed(seed);
    rep.finish(elapsed);
    return 0;
}

int cmd_geninv(const Options& o) {
    Reporter rep(o, "geninv");
    const geninv::Tolerance tol = rank_tolerance(o);
    const std::string method = o.method.empty() ? "randomized" : o.method;
    rep.root()["method"] = method;
    require_input(o, "input matrix");
    Loaded in = load_matrix(o.input);
    rep.input("A", in.info);
    const DenseMatrix& A = in.A;

    const Timer timer;
    DenseMatrix G;
    std::optional<std::uint64_t> seed;
    if (method == "qr") {
        G = geninv::one_inverse_qr(A, tol);
    } else if (method == "randomized" || method == "compact") {
        const SketchChoice s = build_sketch(A, o, rep, geninv::SketchKind::gaussian,
                                            default_width(A, A.rows(), tol), default_width(A, A.cols(), tol));
        seed = s.pair.seed;
        rep.root()["sketch"] = s.info;
        rep.root()["rank_preservation"] = preservation_json(geninv::check_rank_preservation(A, s.pair, tol));
        G = method == "compact" ? geninv::geninv_compact(A, s.pair, tol) : geninv::geninv_randomized(A, s.pair, tol);
    } else {
        throw UsageError("--method: unknown geninv method '" + method + "'");
    }
    const double elapsed = timer.ms();
    rep.matrix("result", G, true);
    rep.penrose(geninv::verify_penrose(A, G));
    rep.seed(seed);
    rep.finish(elapsed);
    return 0;
}

int cmd_verify(const Options& o) {
    Reporter rep(o, "verify");
    require_input(o, "matrix A");
    if (o.second_input.empty()) {
        throw UsageError("missing candidate inverse G");
    }
    const auto required = geninv::inverse_class_from_string(o.require);
    if (!required) {
        throw UsageError("--require: unknown classification '" + o.require + "'");
    }
    Loaded A = load_matrix(o.input);
    Loaded G = load_matrix(o.second_input);
    rep.input("A", A.info);
    rep.input("G", G.info);
    if (G.A.rows() != A.A.cols() || G.A.cols() != A.A.rows()) {
        throw geninv::ShapeError("G must be " + std::to_string(A.A.cols()) + "x" + std::to_string(A.A.rows()) +
                                 " for a " + A.A.shape_string() + " matrix A, got " + G.A.shape_string());
    }
    const Timer timer;
    const geninv::PenroseReport r =
        geninv::verify_penrose(A.A, G.A, o.tol.value_or(geninv::default_identity_tolerance));
    const double elapsed = timer.ms();
    rep.penrose(r);
    rep.root()["required"] = o.require;
    rep.root()["satisfied"] = r.classification >= *required;
    rep.finish(elapsed);
    if (r.classification < *required) {
        throw CheckFailed("classification " + std::string(geninv::to_string(r.classification)) + " is below " +
                          o.require);
    }
    return 0;
}

int cmd_cur(const Options& o) {
    Reporter rep(o, "cur");
    const geninv::Tolerance tol = rank_tolerance(o);
    require_input(o, "input matrix");
    if (o.rows.empty() || o.cols.empty()) {
        throw UsageError("cur needs --rows and --cols");
    }
    Loaded in = load_matrix(o.input);
    rep.input("A", in.info);
    const IndexList I = parse_index_list(o.rows, o.one_based, "--rows");
    const IndexList J = parse_index_list(o.cols, o.one_based, "--cols");
    const Timer timer;
    const DenseMatrix G = geninv::cur_pinv(in.A, I, J, tol);
    const double elapsed = timer.ms();
    rep.root()["rows"] = index_json(I, o.one_based);
    rep.root()["cols"] = index_json(J, o.one_based);
    rep.matrix("result", G, true);
    rep.root()["approximation_error"] = geninv::distance(in.A * G * in.A, in.A);
    rep.penrose(geninv::verify_penrose(in.A, G));
    rep.finish(elapsed);
    return 0;
}

int cmd_nystrom(const Options& o) {
    Reporter rep(o, "nystrom");
    const geninv::Tolerance tol = rank_tolerance(o);
    require_input(o, "input matrix");
    Loaded in = load_matrix(o.input);
    rep.input("A", in.info);
    const DenseMatrix& A = in.A;
    const SketchChoice s = build_sketch(A, o, rep, geninv::SketchKind::gaussian, default_width(A, A.rows(), tol),
                                        default_width(A, A.cols(), tol));
    rep.root()["sketch"] = s.info;
    const Timer timer;
    const geninv::NystromResult r = geninv::generalized_nystrom(A, s.pair, tol);
    const double elapsed = timer.ms();
    rep.root()["rank_preservation"] = preservation_json(geninv::check_rank_preservation(A, s.pair, tol));
    rep.matrix("A_hat", r.A_hat, true);
    rep.matrix("A_pinv", r.A_pinv);
    rep.root()["report"] = json{{"approximation_error", r.report.approximation_error},
                                {"pinv_error", r.report.pinv_error},
                                {"rank_used", r.report.rank_used}};
    rep.seed(s.pair.seed);
    rep.finish(elapsed);
    return 0;
}

int cmd_sensor(const Options& o) {
    Reporter rep(o, "sensor");
    const geninv::Tolerance tol = rank_tolerance(o);
    require_input(o, "input matrix");
    const std::string method = o.method.empty() ? "qr" : o.method;
    if (method != "qr" && method != "lu") {
        throw UsageError("--method: expected qr or lu, got '" + method + "'");
    }
    if (!o.p) {
        throw UsageError("sensor needs -p");
    }
    Loaded in = load_matrix(o.input);
    rep.input("A", in.info);
    const DenseMatrix& A = in.A;

    std::optional<geninv::Vector> y;
    if (!o.signal_file.empty()) {
        Loaded sig = load_matrix(o.signal_file);
        rep.input("signal", sig.info);
        y = geninv::as_vector(sig.A);
    }

    const Timer timer;
    const geninv::SensorPlacement s = method == "qr" ? geninv::sensor_place_qr(A, *o.p)
                                                     : geninv::sensor_place_lu(A, *o.p, o.q);
    const DenseMatrix estimator = geninv::sensor_estimator(A, s, tol);
    std::optional<geninv::Vector> ye;
    if (y) {
        ye = geninv::reconstruct_signal(A, s, *y, tol);
    }
    const double elapsed = timer.ms();

    rep.root()["method"] = std::string(geninv::to_string(s.method));
    rep.root()["row_indices"] = index_json(s.row_indices, o.one_based);
    if (s.col_indices) {
        rep.root()["col_indices"] = index_json(*s.col_indices, o.one_based);
    }
    rep.matrix("estimator", estimator, !ye);
    if (ye) {
        rep.matrix("reconstruction", DenseMatrix::column(*ye), true);
        const double ny = geninv::norm2(*y);
        using geninv::operator-;
        const double err = geninv::norm2(*ye - *y);
        rep.root()["reconstruction_error"] = ny > 0.0 ? err / ny : err;
    }
    rep.finish(elapsed);
    return 0;
}

int cmd_resistance(const Options& o) {
    Reporter rep(o, "resistance");
    const geninv::Tolerance tol = rank_tolerance(o);
    require_input(o, "edge list");
    if (o.estimate != "exact" && o.estimate != "submatrix" && o.estimate != "randomized") {
        throw UsageError("--estimate: expected exact, submatrix or randomized, got '" + o.estimate + "'");
    }
    if (o.all && !o.pairs.empty()) {
        throw UsageError("--pairs and --all are exclusive");
    }
    const std::string text = geninv::read_file(o.input);
    geninv::WeightedGraph g;
    try {
        g = geninv::parse_edge_list(text, o.one_based, o.nodes.value_or(0));
    } catch (const geninv::ParseError& e) {
        throw geninv::ParseError(e.detail(), e.line(), o.input);
    }
    json info = file_info(o.input, text);
    info["nodes"] = g.node_count;
    info["edges"] = g.edges.size();
    rep.input("graph", info);
    rep.root()["estimate"] = o.estimate;

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (o.pairs.empty()) {
        pairs = geninv::all_pairs(g.node_count);
    } else {
        for (const IndexList& p : parse_groups(o.pairs, 2, o.one_based, "--pairs")) {
            pairs.emplace_back(p[0], p[1]);
        }
    }
    std::vector<IndexList> triples;
    if (!o.triples.empty()) {
        triples = parse_groups(o.triples, 3, o.one_based, "--triples");
    }

    const DenseMatrix L = geninv::laplacian(g);
    const std::size_t base = o.one_based ? 1 : 0;
    const Timer timer;
    json rows = json::array();
    std::optional<std::uint64_t> seed;
    if (o.estimate == "randomized") {
        const SketchChoice s = build_sketch(L, o, rep, geninv::SketchKind::gaussian, L.rows(), L.cols());
        seed = s.pair.seed;
        rep.root()["sketch"] = s.info;
        rep.root()["rank_preservation"] = preservation_json(geninv::check_rank_preservation(L, s.pair, tol));
        for (const auto& [i, j] : pairs) {
            geninv::check_pair(L, i, j);
        }
        const DenseMatrix R = geninv::resistance_randomized(L, s.pair, tol);
        for (const auto& [i, j] : pairs) {
            rows.push_back(json{{"i", i + base}, {"j", j + base}, {"approx", R(i, j)}});
        }
    } else {
        if (auto comps = geninv::connected_components(g); comps.size() > 1) {
            for (IndexList& c : comps) {
                for (std::size_t& v : c) {
                    v += base;
                }
            }
            throw geninv::PreconditionError("graph is disconnected: components " +
                                            geninv::detail::describe_components(comps));
        }
        const geninv::LaplacianSpectrum spec = geninv::analyze_laplacian(L);
        rep.root()["lambda2"] = spec.lambda2;
        rep.root()["gamma"] = spec.gamma;
        for (const geninv::ResistanceEstimate& e : geninv::resistance_submatrix_estimates(L, pairs)) {
            json r{{"i", e.i + base}, {"j", e.j + base}, {"exact", e.exact}};
            if (o.estimate == "submatrix") {
                r["approx"] = e.approx;
                r["epsilon"] = e.epsilon;
            }
            rows.push_back(std::move(r));
        }
    }
    rep.root()["pairs"] = std::move(rows);

    if (!triples.empty()) {
        const double gamma = geninv::gamma_bound(L);
        json verdicts = json::array();
        for (const IndexList& t : triples) {
            const auto est = geninv::resistance_submatrix_estimates(L, {{t[0], t[1]}, {t[0], t[2]}});
            const geninv::OrderingInference v = geninv::infer_ordering(est[0].approx, est[1].approx, gamma);
            verdicts.push_back(json{{"i", t[0] + base},
                                    {"j", t[1] + base},
                                    {"k", t[2] + base},
                                    {"rt_ij", est[0].approx},
                                    {"rt_ik", est[1].approx},
                                    {"verdict", std::string(geninv::to_string(v.verdict))}});
        }
        rep.root()["orderings"] = std::move(verdicts);
    }
    const double elapsed = timer.ms();
    rep.seed(seed);
    rep.finish(elapsed);
    return 0;
}

int cmd_sketch(const Options& o) {
    Reporter rep(o, "sketch");
    const geninv::Tolerance tol = rank_tolerance(o);
    require_input(o, "input matrix");
    Loaded in = load_matrix(o.input);
    rep.input("A", in.info);
    const DenseMatrix& A = in.A;
    const Timer timer;
    const SketchChoice s = build_sketch(A, o, rep, geninv::SketchKind::gaussian, default_width(A, A.rows(), tol),
                                        default_width(A, A.cols(), tol));
    const geninv::RankPreservationReport r = geninv::check_rank_preservation(A, s.pair, tol);
    const double elapsed = timer.ms();
    rep.root()["sketch"] = s.info;
    rep.root()["rank_preservation"] = preservation_json(r);
    if (!o.out_p.empty()) {
        geninv::write_matrix(o.out_p, s.pair.P, geninv::guess_format(o.out_p, ""));
    }
    if (!o.out_q.empty()) {
        geninv::write_matrix(o.out_q, s.pair.Q, geninv::guess_format(o.out_q, ""));
    }
    rep.matrix("P", s.pair.P);
    rep.matrix("Q", s.pair.Q);
    rep.seed(s.pair.seed);
    rep.finish(elapsed);
    return 0;
}

// ---------------------------------------------------------------------------
// Option wiring
// ---------------------------------------------------------------------------

void add_common(CLI::App* sub, Options& o) {
    sub->add_flag("--json", o.json_output, "Print the report as JSON");
    sub->add_option("--out", o.out, "Write the main result matrix here");
    sub->add_option("--format", o.format, "Output matrix format: mm or csv (default from --out extension)");
    sub->add_option("--tol", o.tol, "Absolute rank tolerance (default: automatic)");
    sub->add_flag("--one-based", o.one_based, "Read and print indices starting at 1");
}

void add_sketch(CLI::App* sub, Options& o) {
    sub->add_option("--sketch", o.sketch, "Sketch kind: gaussian, orthonormal or column_select");
    sub->add_option("-p", o.p, "Width of the row sketch P");
    sub->add_option("-q", o.q, "Width of the column sketch Q");
    sub->add_option("--seed", o.seed, "Seed for random sketches (fallback: GENINV_SEED)");
    sub->add_option("--rows", o.rows, "Row indices for a column_select sketch, e.g. 0,2");
    sub->add_option("--cols", o.cols, "Column indices for a column_select sketch");
    sub->add_option("--P", o.p_file, "Matrix file holding P");
    sub->add_option("--Q", o.q_file, "Matrix file holding Q");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudoinverses, generalized inverses and sketched inverses of dense matrices"};
    app.require_subcommand(1);
    Options o;
    std::function<int(const Options&)> run;

    CLI::App* pinv = app.add_subcommand("pinv", "Moore-Penrose pseudoinverse");
    pinv->add_option("input", o.input, "Matrix file (.mtx or .csv)");
    pinv->add_option("--method", o.method, "oracle, reverse_order, corrected, macduffee, randomized or orthogonal");
    pinv->add_option("--C", o.c_file, "Left factor, used instead of the input matrix");
    pinv->add_option("--R", o.r_file, "Right factor");
    add_common(pinv, o);
    add_sketch(pinv, o);
    pinv->callback([&] { run = cmd_pinv; });

    CLI::App* gi = app.add_subcommand("geninv", "Generalized {1,2}-inverse");
    gi->add_option("input", o.input, "Matrix file");
    gi->add_option("--method", o.method, "randomized, compact or qr");
    add_common(gi, o);
    add_sketch(gi, o);
    gi->callback([&] { run = cmd_geninv; });

    CLI::App* verify = app.add_subcommand("verify", "Check the Penrose identities for a candidate inverse");
    verify->add_option("A", o.input, "Matrix file")->required();
    verify->add_option("G", o.second_input, "Candidate inverse")->required();
    verify->add_option("--require", o.require, "Minimum classification: one_inverse, one_two_inverse, pseudoinverse");
    verify->add_flag("--json", o.json_output, "Print the report as JSON");
    verify->add_option("--tol", o.tol, "Absolute tolerance on the residuals (default 1e-9)");
    verify->callback([&] { run = cmd_verify; });

    CLI::App* cur = app.add_subcommand("cur", "Pseudoinverse from a row and column selection");
    cur->add_option("input", o.input, "Matrix file");
    cur->add_option("--rows", o.rows, "Row indices, e.g. 0,1");
    cur->add_option("--cols", o.cols, "Column indices");
    add_common(cur, o);
    cur->callback([&] { run = cmd_cur; });

    CLI::App* ny = app.add_subcommand("nystrom", "Generalized Nystrom reconstruction");
    ny->add_option("input", o.input, "Matrix file");
    add_common(ny, o);
    add_sketch(ny, o);
    ny->callback([&] { run = cmd_nystrom; });

    CLI::App* sensor = app.add_subcommand("sensor", "Sensor placement by pivoted QR or LU");
    sensor->add_option("input", o.input, "Matrix file");
    sensor->add_option("--method", o.method, "qr or lu");
    sensor->add_option("-p", o.p, "Number of sensors (rows)");
    sensor->add_option("-q", o.q, "Number of columns kept by lu (default p)");
    sensor->add_option("--signal", o.signal_file, "Signal vector to reconstruct");
    add_common(sensor, o);
    sensor->callback([&] { run = cmd_sensor; });

    CLI::App* res = app.add_subcommand("resistance", "Effective resistance on a weighted graph");
    res->add_option("input", o.input, "Edge list: one 'i j w' per line");
    res->add_option("--pairs", o.pairs, "Node pairs, e.g. \"0,1;0,3\"");
    res->add_flag("--all", o.all, "All node pairs (the default)");
    res->add_option("--estimate", o.estimate, "exact, submatrix or randomized");
    res->add_option("--triples", o.triples, "Ordering queries i,j,k: is R_ij below R_ik?");
    res->add_option("--nodes", o.nodes, "Node count when trailing nodes have no edges");
    add_common(res, o);
    add_sketch(res, o);
    res->callback([&] { run = cmd_resistance; });

    CLI::App* sk = app.add_subcommand("sketch", "Draw a sketch pair and check rank preservation");
    sk->add_option("input", o.input, "Matrix file");
    sk->add_option("--out-p", o.out_p, "Write P here");
    sk->add_option("--out-q", o.out_q, "Write Q here");
    add_common(sk, o);
    add_sketch(sk, o);
    sk->callback([&] { run = cmd_sketch; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return run(o);
    } catch (const CheckFailed& e) {
        std::cerr << "geninv: " << e.what() << '\n';
        return 3;
    } catch (const UsageError& e) {
        std::cerr << "geninv: error: " << e.what() << '\n';
        return 1;
    } catch (const geninv::ParseError& e) {
        std::cerr << "geninv: parse error: " << e.what() << '\n';
        return 1;
    } catch (const geninv::IoError& e) {
        std::cerr << "geninv: " << e.what() << '\n';
        return 1;
    } catch (const geninv::ShapeError& e) {
        std::cerr << "geninv: shape error: " << e.what() << '\n';
        return 1;
    } catch (const geninv::Error& e) {
        std::cerr << "geninv: " << e.what() << '\n';
        return 2;
    }
}
