#include "plcc/fields.hpp"

#include "plcc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace plcc {

GridFunction::GridFunction(MeshPtr mesh) : mesh_(std::move(mesh)), values_(mesh_->num_nodes(), 0.0) {}

GridFunction::GridFunction(MeshPtr mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (values_.size() != mesh_->num_nodes())
        throw IncompatibleFields("value count " + std::to_string(values_.size()) + " != node count " +
                                 std::to_string(mesh_->num_nodes()));
}

GridFunction GridFunction::from_function(MeshPtr mesh, const std::function<double(const Point&)>& f) {
    std::vector<double> v(mesh->num_nodes());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(mesh->node(i));
    return GridFunction(std::move(mesh), std::move(v));
}

bool GridFunction::is_dirichlet_zero() const {
    for (int b : mesh_->boundary_nodes())
        if (values_[b] != 0.0) return false;
    return true;
}

void GridFunction::impose_dirichlet_zero() {
    for (int b : mesh_->boundary_nodes()) values_[b] = 0.0;
}

GridFunction& GridFunction::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

void require_same_mesh(const Mesh& a, const Mesh& b) {
    if (&a != &b) throw IncompatibleFields("fields live on different meshes");
}

WeightField::WeightField(MeshPtr mesh, Kind kind, std::vector<double> values, std::string description)
    : mesh_(std::move(mesh)), kind_(kind), values_(std::move(values)), description_(std::move(description)) {
    if (values_.size() != mesh_->num_nodes())
        throw IncompatibleFields("weight sample count does not match node count");
    for (double v : values_) {
        if (!std::isfinite(v) || !(v > 0.0))
            throw DomainError("weight " + description_ + " has a non-positive or non-finite sample");
    }
    const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
    inf_ = *lo;
    sup_ = *hi;
}

WeightField WeightField::constant(MeshPtr mesh, double c) {
    std::vector<double> v(mesh->num_nodes(), c);
    char buf[64];
    std::snprintf(buf, sizeof buf, "const:%.17g", c);
    return WeightField(std::move(mesh), Kind::Constant, std::move(v), buf);
}

WeightField WeightField::sine(MeshPtr mesh, double alpha) {
    if (!(std::abs(alpha) < 1.0)) throw DomainError("sine weight requires |alpha| < 1");
    std::vector<double> v(mesh->num_nodes());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + alpha * std::sin(std::numbers::pi * mesh->node(i)[0]);
    char buf[64];
    std::snprintf(buf, sizeof buf, "sin:%.17g", alpha);
    return WeightField(std::move(mesh), Kind::Sine, std::move(v), buf);
}

WeightField WeightField::affine(MeshPtr mesh, double c0, double c1) {
    std::vector<double> v(mesh->num_nodes());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = c0 + c1 * mesh->node(i)[0];
    char buf[96];
    std::snprintf(buf, sizeof buf, "affine:%.17g,%.17g", c0, c1);
    return WeightField(std::move(mesh), Kind::Affine, std::move(v), buf);
}

WeightField WeightField::nodal(MeshPtr mesh, std::vector<double> values) {
    return WeightField(std::move(mesh), Kind::Nodal, std::move(values), "nodal");
}

namespace {

double parse_number(const std::string& s, const std::string& whole) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw InvalidSpec("cannot parse number in weight spec '" + whole + "'");
    }
    if (pos != s.size()) throw InvalidSpec("trailing characters in weight spec '" + whole + "'");
    return v;
}

}  // namespace

WeightField WeightField::parse(MeshPtr mesh, const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        // A bare number is a constant.
        return constant(std::move(mesh), parse_number(spec, spec));
    }
    const std::string kind = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    try {
        if (kind == "const") return constant(std::move(mesh), parse_number(arg, spec));
        if (kind == "sin") return sine(std::move(mesh), parse_number(arg, spec));
        if (kind == "affine") {
            const auto comma = arg.find(',');
            if (comma == std::string::npos) throw InvalidSpec("affine weight needs 'affine:C0,C1'");
            return affine(std::move(mesh), parse_number(arg.substr(0, comma), spec),
                          parse_number(arg.substr(comma + 1), spec));
        }
        if (kind == "file") {
            GridFunction g = read_csv(mesh, arg);
            std::vector<double> v(g.values().begin(), g.values().end());
            WeightField w = nodal(std::move(mesh), std::move(v));
            w.description_ = spec;
            return w;
        }
    } catch (const DomainError& e) {
        throw InvalidSpec(e.what());
    } catch (const IncompatibleFields& e) {
        throw InvalidSpec(e.what());
    }
    throw InvalidSpec("unknown weight family '" + kind + "'");
}

WeightField WeightField::scaled(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g*", c);
    return WeightField(mesh_, kind_, std::move(v), buf + description_);
}

void write_csv(const GridFunction& f, std::ostream& out) {
    const Mesh& mesh = f.mesh();
    out << (mesh.dimension() == 1 ? "x,u\n" : "x,y,u\n");
    char buf[96];
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Point& p = mesh.node(i);
        if (mesh.dimension() == 1)
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p[0], f[i]);
        else
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p[0], p[1], f[i]);
        out << buf;
    }
}

void write_csv(const GridFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_csv(f, out);
}

GridFunction read_csv(MeshPtr mesh, std::istream& in) {
    const int dim = mesh->dimension();
    const std::string expected = dim == 1 ? "x,u" : "x,y,u";
    std::string line;
    if (!std::getline(in, line)) throw IncompatibleFields("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected) throw IncompatibleFields("CSV header '" + line + "' != '" + expected + "'");

    const double scale = std::max(1.0, mesh->diameter());
    std::vector<double> values;
    values.reserve(mesh->num_nodes());
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<double> cols;
        while (std::getline(row, cell, ',')) {
            try {
                cols.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IncompatibleFields("bad CSV value '" + cell + "'");
            }
        }
        if (static_cast<int>(cols.size()) != dim + 1) throw IncompatibleFields("bad CSV row '" + line + "'");
        const std::size_t i = values.size();
        if (i >= mesh->num_nodes()) throw IncompatibleFields("CSV has more rows than mesh nodes");
        const Point& p = mesh->node(i);
        for (int d = 0; d < dim; ++d)
            if (std::abs(cols[d] - p[d]) > 1e-9 * scale)
                throw IncompatibleFields("CSV row " + std::to_string(i) + " coordinates do not match mesh node");
        values.push_back(cols[dim]);
    }
    if (values.size() != mesh->num_nodes()) throw IncompatibleFields("CSV row count != node count");
    return GridFunction(std::move(mesh), std::move(values));
}

GridFunction read_csv(MeshPtr mesh, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IncompatibleFields("cannot open '" + path + "'");
    return read_csv(std::move(mesh), in);
}

}  // namespace plcc
