/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#include "sdmd/model.hpp"

#include "sdmd/detail/format.hpp"
#include "sdmd/kernels.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace sdmd {

Index Block::rows() const {
    return is_sparse() ? sparse().rows() : dense().rows();
}

Index Block::cols() const {
    return is_sparse() ? sparse().cols() : dense().cols();
}

const Matrix& Block::dense() const {
    if (is_sparse()) {
        throw DimensionError("Block: dense() called on a sparse block");
    }
    return std::get<Matrix>(data_);
}

const SparseMatrix& Block::sparse() const {
    if (!is_sparse()) {
        throw DimensionError("Block: sparse() called on a dense block");
    }
    return std::get<SparseMatrix>(data_);
}

SparseMatrix& Block::sparse() {
    if (!is_sparse()) {
        throw DimensionError("Block: sparse() called on a dense block");
    }
    return std::get<SparseMatrix>(data_);
}

Matrix Block::to_dense() const {
    return is_sparse() ? Matrix(sparse()) : dense();
}

double Block::scalar() const {
    if (rows() != 1 || cols() != 1) {
        throw DimensionError("Block: scalar() on a non-1x1 block");
    }
    return is_sparse() ? sparse().coeff(0, 0) : dense()(0, 0);
}

Vector Block::apply(const Vector& x) const {
    if (x.size() != cols()) {
        throw DimensionError("Block: apply() dimension mismatch");
    }
    return is_sparse() ? Vector(sparse() * x) : Vector(dense() * x);
}

Vector Block::apply_quadratic(const Vector& x) const {
    const Index n = x.size();
    if (cols() != n * n) {
        throw DimensionError("Block: apply_quadratic() expects n^2 columns");
    }
    if (!is_sparse()) {
        return kernels::apply_quadratic(dense(), x);
    }
    Vector out = Vector::Zero(rows());
    const SparseMatrix& S = sparse();
    for (Index outer = 0; outer < S.outerSize(); ++outer) {
        for (SparseMatrix::InnerIterator it(S, outer); it; ++it) {
            const Index j = it.col() / n;
            const Index k = it.col() % n;
            out(it.row()) += it.value() * x(j) * x(k);
        }
    }
    return out;
}

Block scale_add_identity(const Block& M, double scale, double diag) {
    if (diag != 0.0 && M.rows() != M.cols()) {
        throw DimensionError("scale_add_identity: identity shift needs a square block");
    }
    if (!M.is_sparse()) {
        Matrix out = scale * M.dense();
        if (diag != 0.0) {
            out.diagonal().array() += diag;
        }
        return Block(std::move(out));
    }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(M.sparse().nonZeros() + M.rows()));
    const SparseMatrix& S = M.sparse();
    for (Index outer = 0; outer < S.outerSize(); ++outer) {
        for (SparseMatrix::InnerIterator it(S, outer); it; ++it) {
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                               scale * it.value());
        }
    }
    if (diag != 0.0) {
        for (Index i = 0; i < M.rows(); ++i) {
            trips.emplace_back(static_cast<int>(i), static_cast<int>(i), diag);
        }
    }
    SparseMatrix out(M.rows(), M.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    return Block(std::move(out));
}

namespace {

// (M + shift·I) / divisor with the subtraction performed before the division,
// matching the conversion formulas entrywise.
Block shift_then_divide(const Block& M, double shift, double divisor) {
    if (shift != 0.0 && M.rows() != M.cols()) {
        throw DimensionError("conversion: identity shift needs a square block");
    }
    if (!M.is_sparse()) {
        Matrix out = M.dense();
        if (shift != 0.0) {
            out.diagonal().array() += shift;
        }
        out /= divisor;
        return Block(std::move(out));
    }
    const SparseMatrix& S = M.sparse();
    std::map<Index, double> diagonal;
    if (shift != 0.0) {
        for (Index i = 0; i < M.rows(); ++i) {
            diagonal[i] = shift;
        }
    }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(S.nonZeros() + M.rows()));
    for (Index outer = 0; outer < S.outerSize(); ++outer) {
        for (SparseMatrix::InnerIterator it(S, outer); it; ++it) {
            if (shift != 0.0 && it.row() == it.col()) {
                diagonal[it.row()] += it.value();
            } else {
                trips.emplace_back(static_cast<int>(it.row()),
                                   static_cast<int>(it.col()), it.value() / divisor);
            }
        }
    }
    for (const auto& [i, v] : diagonal) {
        trips.emplace_back(static_cast<int>(i), static_cast<int>(i), v / divisor);
    }
    SparseMatrix out(M.rows(), M.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    return Block(std::move(out));
}

void check_block(const std::optional<Block>& block, bool allowed, Index rows,
                 Index cols, const char* name) {
    if (block && !allowed) {
        throw DimensionError(std::string("model: block ") + name +
                             " not allowed by the structure");
    }
    if (block && (block->rows() != rows || block->cols() != cols)) {
        throw DimensionError(std::string("model: block ") + name + " has shape " +
                             std::to_string(block->rows()) + "x" +
                             std::to_string(block->cols()) + ", expected " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    }
}

template <typename ModelT>
void validate_blocks(const ModelT& model) {
    const Index n = model.order;
    if (n < 1) {
        throw DimensionError("model: order must be positive");
    }
    if (model.A.rows() != n || model.A.cols() != n) {
        throw DimensionError("model: A must be order x order");
    }
    const ModelStructure& s = model.structure;
    check_block(model.B, s.has_input(), n, 1, "B");
    check_block(model.N, s.has_bilinear(), n, n, "N");
    check_block(model.Q, s.has_quadratic(), n, n * n, "Q");
    check_block(model.C, s.has_output(), 1, n, "C");
    check_block(model.D, s.has_output(), 1, 1, "D");
    check_block(model.F, s.has_output() && s.has_bilinear(), 1, n, "F");
    check_block(model.K, s.has_quadratic_output(), 1, n * n, "K");
    if (model.basis && model.basis->cols() != n) {
        throw DimensionError("model: basis must have order columns");
    }
}

} // namespace

void validate(const DiscreteModel& model) {
    validate_blocks(model);
    if (!(model.dt > 0.0)) {
        throw DimensionError("model: dt must be positive");
    }
}

void validate(const ContinuousModel& model) {
    validate_blocks(model);
}

SimulationResult simulate_discrete(const DiscreteModel& model, const RowVector& u,
                                   const Vector& x0) {
    validate(model);
    const Index n = model.order;
    if (x0.size() != n) {
        throw DimensionError("simulate_discrete: x0 has wrong length");
    }
    const Index m = u.size();
    const bool emit_output = model.C || model.D || model.F || model.K;

    SimulationResult result;
    result.states.resize(n, m + 1);
    result.states.col(0) = x0;
    if (emit_output) {
        result.outputs.emplace(m);
    }

    Vector x = x0;
    Vector u_vec(1);
    for (Index k = 0; k < m; ++k) {
        const double uk = u(k);
        u_vec(0) = uk;

        if (emit_output) {
            double y = 0.0;
            if (model.C) {
                y += model.C->apply(x)(0);
            }
            if (model.K) {
                y += model.K->apply_quadratic(x)(0);
            }
            if (model.F) {
                y += model.F->apply(x)(0) * uk;
            }
            if (model.D) {
                y += model.D->scalar() * uk;
            }
            if (!std::isfinite(y)) {
                throw DivergenceError(k);
            }
            (*result.outputs)(k) = y;
        }

        Vector next = model.A.apply(x);
        if (model.Q) {
            next += model.Q->apply_quadratic(x);
        }
        if (model.N) {
            next += model.N->apply(x) * uk;
        }
        if (model.B) {
            next += model.B->apply(u_vec);
        }
        if (!next.allFinite()) {
            throw DivergenceError(k + 1);
        }
        result.states.col(k + 1) = next;
        x = std::move(next);
    }
    return result;
}

ContinuousModel discrete_to_continuous(const DiscreteModel& model) {
    validate(model);
    const double dt = model.dt;

    ContinuousModel out;
    out.structure = model.structure;
    out.order = model.order;
    out.A = shift_then_divide(model.A, -1.0, dt);
    if (model.B) {
        out.B = shift_then_divide(*model.B, 0.0, dt);
    }
    if (model.N) {
        out.N = shift_then_divide(*model.N, 0.0, dt);
    }
    if (model.Q) {
        out.Q = shift_then_divide(*model.Q, 0.0, dt);
    }
    out.C = model.C;
    out.D = model.D;
    out.F = model.F;
    out.K = model.K;
    out.basis = model.basis;
    return out;
}

DiscreteModel continuous_to_discrete(const ContinuousModel& model, double dt) {
    validate(model);
    if (!(dt > 0.0)) {
        throw DimensionError("continuous_to_discrete: dt must be positive");
    }

    DiscreteModel out;
    out.structure = model.structure;
    out.order = model.order;
    out.dt = dt;
    out.A = scale_add_identity(model.A, dt, 1.0);
    if (model.B) {
        out.B = scale_add_identity(*model.B, dt, 0.0);
    }
    if (model.N) {
        out.N = scale_add_identity(*model.N, dt, 0.0);
    }
    if (model.Q) {
        out.Q = scale_add_identity(*model.Q, dt, 0.0);
    }
    out.C = model.C;
    out.D = model.D;
    out.F = model.F;
    out.K = model.K;
    out.basis = model.basis;
    return out;
}

double relative_output_error(const RowVector& y_ref, const RowVector& y_test) {
    if (y_ref.size() != y_test.size()) {
        throw DimensionError("relative_output_error: length mismatch");
    }
    const double ref_norm = y_ref.norm();
    if (!(ref_norm > 0.0)) {
        throw NumericalError("relative_output_error: zero reference norm");
    }
    return (y_ref - y_test).norm() / ref_norm;
}

RowVector absolute_error_series(const RowVector& y_ref, const RowVector& y_test) {
    if (y_ref.size() != y_test.size()) {
        throw DimensionError("absolute_error_series: length mismatch");
    }
    return (y_ref - y_test).cwiseAbs();
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

void write_block(std::ofstream& out, const char* name, const Block& block) {
    if (block.is_sparse()) {
        const SparseMatrix& S = block.sparse();
        out << "block " << name << " sparse " << S.rows() << ' ' << S.cols() << ' '
            << S.nonZeros() << '\n';
        for (Index outer = 0; outer < S.outerSize(); ++outer) {
            for (SparseMatrix::InnerIterator it(S, outer); it; ++it) {
                out << it.row() << ' ' << it.col() << ' '
                    << detail::to_decimal(it.value()) << '\n';
            }
        }
    } else {
        const Matrix& M = block.dense();
        out << "block " << name << " dense " << M.rows() << ' ' << M.cols() << '\n';
        for (Index i = 0; i < M.rows(); ++i) {
            for (Index j = 0; j < M.cols(); ++j) {
                out << (j ? " " : "") << detail::to_decimal(M(i, j));
            }
            out << '\n';
        }
    }
}

template <typename ModelT>
void write_blocks(std::ofstream& out, const ModelT& model) {
    write_block(out, "A", model.A);
    if (model.B) {
        write_block(out, "B", *model.B);
    }
    if (model.N) {
        write_block(out, "N", *model.N);
    }
    if (model.Q) {
        write_block(out, "Q", *model.Q);
    }
    if (model.C) {
        write_block(out, "C", *model.C);
    }
    if (model.D) {
        write_block(out, "D", *model.D);
    }
    if (model.F) {
        write_block(out, "F", *model.F);
    }
    if (model.K) {
        write_block(out, "K", *model.K);
    }
    if (model.basis) {
        write_block(out, "basis", Block(*model.basis));
    }
    out << "end\n";
}

template <typename ModelT>
void write_header(std::ofstream& out, const ModelT& model, const char* kind) {
    out << "sdmd-model 1\n";
    out << "kind " << kind << '\n';
    out << "structure " << model.structure.name() << '\n';
    out << "order " << model.order << '\n';
    if (model.structure.kind == StructureKind::QuadraticBilinearIO) {
        out << "quad-output " << (model.structure.include_quadratic_output ? 1 : 0)
            << '\n';
    }
}

std::string next_token(std::ifstream& in, const std::string& context) {
    std::string tok;
    if (!(in >> tok)) {
        throw std::runtime_error(context + ": unexpected end of model file");
    }
    return tok;
}

Block read_block_body(std::ifstream& in, const std::string& storage) {
    const Index rows = std::stoll(next_token(in, "model"));
    const Index cols = std::stoll(next_token(in, "model"));
    if (rows < 1 || cols < 1) {
        throw std::runtime_error("model file: bad block shape");
    }
    if (storage == "dense") {
        Matrix M(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            for (Index j = 0; j < cols; ++j) {
                M(i, j) = detail::parse_double(next_token(in, "model"), "model file");
            }
        }
        return Block(std::move(M));
    }
    if (storage == "sparse") {
        const Index nnz = std::stoll(next_token(in, "model"));
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(nnz));
        for (Index e = 0; e < nnz; ++e) {
            const Index i = std::stoll(next_token(in, "model"));
            const Index j = std::stoll(next_token(in, "model"));
            const double v = detail::parse_double(next_token(in, "model"), "model file");
            trips.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
        }
        SparseMatrix S(rows, cols);
        S.setFromTriplets(trips.begin(), trips.end());
        return Block(std::move(S));
    }
    throw std::runtime_error("model file: unknown storage '" + storage + "'");
}

struct RawModel {
    std::string kind;
    ModelStructure structure;
    Index order = 0;
    double dt = 0.0;
    std::map<std::string, Block> blocks;
};

RawModel read_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_model: cannot open '" + path + "'");
    }
    RawModel raw;
    std::string magic = next_token(in, "model");
    std::string version = next_token(in, "model");
    if (magic != "sdmd-model" || version != "1") {
        throw std::runtime_error("load_model: not a version-1 model file");
    }
    bool quad_output = true;
    while (true) {
        const std::string key = next_token(in, "model");
        if (key == "end") {
            break;
        }
        if (key == "kind") {
            raw.kind = next_token(in, "model");
        } else if (key == "structure") {
            raw.structure = parse_structure(next_token(in, "model"));
        } else if (key == "order") {
            raw.order = std::stoll(next_token(in, "model"));
        } else if (key == "dt") {
            raw.dt = detail::parse_double(next_token(in, "model"), "model file");
        } else if (key == "quad-output") {
            quad_output = next_token(in, "model") != "0";
        } else if (key == "block") {
            const std::string name = next_token(in, "model");
            const std::string storage = next_token(in, "model");
            raw.blocks.emplace(name, read_block_body(in, storage));
        } else {
            throw std::runtime_error("load_model: unknown key '" + key + "'");
        }
    }
    raw.structure.include_quadratic_output = quad_output;
    return raw;
}

template <typename ModelT>
void assign_blocks(ModelT& model, RawModel& raw) {
    auto take = [&raw](const char* name) -> std::optional<Block> {
        auto it = raw.blocks.find(name);
        if (it == raw.blocks.end()) {
            return std::nullopt;
        }
        std::optional<Block> b(std::move(it->second));
        raw.blocks.erase(it);
        return b;
    };
    model.structure = raw.structure;
    model.order = raw.order;
    auto a = take("A");
    if (!a) {
        throw std::runtime_error("load_model: missing block A");
    }
    model.A = std::move(*a);
    model.B = take("B");
    model.N = take("N");
    model.Q = take("Q");
    model.C = take("C");
    model.D = take("D");
    model.F = take("F");
    model.K = take("K");
    if (auto basis = take("basis")) {
        model.basis = basis->to_dense();
    }
    if (!raw.blocks.empty()) {
        throw std::runtime_error("load_model: unknown block '" +
                                 raw.blocks.begin()->first + "'");
    }
}

} // namespace

void save_model(const DiscreteModel& model, const std::string& path) {
    validate(model);
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("save_model: cannot open '" + path + "'");
    }
    write_header(out, model, "discrete");
    out << "dt " << detail::to_decimal(model.dt) << '\n';
    write_blocks(out, model);
}

void save_model(const ContinuousModel& model, const std::string& path) {
    validate(model);
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("save_model: cannot open '" + path + "'");
    }
    write_header(out, model, "continuous");
    write_blocks(out, model);
}

AnyModel load_model(const std::string& path) {
    RawModel raw = read_model(path);
    if (raw.kind == "discrete") {
        DiscreteModel model;
        model.dt = raw.dt;
        assign_blocks(model, raw);
        validate(model);
        return model;
    }
    if (raw.kind == "continuous") {
        ContinuousModel model;
        assign_blocks(model, raw);
        validate(model);
        return model;
    }
    throw std::runtime_error("load_model: unknown kind '" + raw.kind + "'");
}

DiscreteModel load_discrete_model(const std::string& path) {
    AnyModel any = load_model(path);
    if (auto* d = std::get_if<DiscreteModel>(&any)) {
        return std::move(*d);
    }
    throw ConfigError("expected a discrete model in '" + path + "'");
}

ContinuousModel load_continuous_model(const std::string& path) {
    AnyModel any = load_model(path);
    if (auto* c = std::get_if<ContinuousModel>(&any)) {
        return std::move(*c);
    }
    throw ConfigError("expected a continuous model in '" + path + "'");
}

} // namespace sdmd
