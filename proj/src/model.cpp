#include "subharm/model.hpp"

#include "subharm/errors.hpp"

#include <utility>

namespace subharm {

ReactionModel::ReactionModel(std::string id, Kind kind, int n, ParamMap params)
    : id_(std::move(id)), kind_(kind), n_(n), params_(std::move(params)) {
    validate();
    switch (kind_) {
    case Kind::RealGinzburgLandau: p0_ = params_.at("q"); break;
    case Kind::Brusselator:
        p0_ = params_.at("A");
        p1_ = params_.at("B");
        break;
    case Kind::Nagumo: p0_ = params_.at("alpha"); break;
    }
}

ReactionModel ReactionModel::real_gl(double q) { return {"rgl", Kind::RealGinzburgLandau, 2, {{"q", q}}}; }

ReactionModel ReactionModel::brusselator(double a, double b) {
    return {"brusselator", Kind::Brusselator, 2, {{"A", a}, {"B", b}}};
}

ReactionModel ReactionModel::nagumo(double alpha) { return {"nagumo", Kind::Nagumo, 1, {{"alpha", alpha}}}; }

ReactionModel ReactionModel::from_id(const std::string& id, const ParamMap& params) {
    ParamMap merged;
    Kind kind;
    int n;
    std::string canonical;
    if (id == "rgl" || id == "realGL") {
        merged = {{"q", 0.3}};
        kind = Kind::RealGinzburgLandau;
        n = 2;
        canonical = "rgl";
    } else if (id == "brusselator") {
        merged = {{"A", 1.0}, {"B", 3.0}};
        kind = Kind::Brusselator;
        n = 2;
        canonical = "brusselator";
    } else if (id == "nagumo") {
        merged = {{"alpha", 0.25}};
        kind = Kind::Nagumo;
        n = 1;
        canonical = "nagumo";
    } else {
        throw ArgumentError("unknown model id '" + id + "'");
    }
    for (const auto& [key, value] : params) {
        if (!merged.count(key)) throw ArgumentError("model '" + canonical + "' has no parameter '" + key + "'");
        merged[key] = value;
    }
    return {canonical, kind, n, merged};
}

double ReactionModel::param(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw ArgumentError("model '" + id_ + "' has no parameter '" + name + "'");
    return it->second;
}

ReactionModel ReactionModel::with_param(const std::string& name, double value) const {
    if (!has_param(name)) throw ArgumentError("model '" + id_ + "' has no parameter '" + name + "'");
    ParamMap p = params_;
    p[name] = value;
    return {id_, kind_, n_, p};
}

void ReactionModel::validate() const {
    switch (kind_) {
    case Kind::RealGinzburgLandau: {
        const double q = params_.at("q");
        // amplitude sqrt(1 - q^2) must be real and the wavenumber nonzero
        if (!(q > 0.0 && q < 1.0)) throw ArgumentError("rgl requires 0 < q < 1 (amplitude sqrt(1-q^2) must be real and positive)");
        break;
    }
    case Kind::Brusselator:
        if (!(params_.at("A") > 0.0) || !(params_.at("B") > 0.0)) throw ArgumentError("brusselator requires A > 0 and B > 0");
        break;
    case Kind::Nagumo: {
        const double a = params_.at("alpha");
        if (!(a > 0.0 && a < 1.0)) throw ArgumentError("nagumo requires 0 < alpha < 1");
        break;
    }
    }
}

void ReactionModel::f_inplace(const double* u, double* out) const noexcept {
    switch (kind_) {
    case Kind::RealGinzburgLandau: {
        const double g = 1.0 - u[0] * u[0] - u[1] * u[1];
        out[0] = g * u[0];
        out[1] = g * u[1];
        break;
    }
    case Kind::Brusselator: {
        const double uuv = u[0] * u[0] * u[1];
        out[0] = p0_ - (p1_ + 1.0) * u[0] + uuv;
        out[1] = p1_ * u[0] - uuv;
        break;
    }
    case Kind::Nagumo: out[0] = u[0] * (1.0 - u[0]) * (u[0] - p0_); break;
    }
}

void ReactionModel::remainder_inplace(const double* u, const double* w, double* out) const noexcept {
    switch (kind_) {
    case Kind::RealGinzburgLandau: {
        // -(2 (u.w) w + |w|^2 u + |w|^2 w)
        const double uw = u[0] * w[0] + u[1] * w[1];
        const double ww = w[0] * w[0] + w[1] * w[1];
        out[0] = -(2.0 * uw * w[0] + ww * (u[0] + w[0]));
        out[1] = -(2.0 * uw * w[1] + ww * (u[1] + w[1]));
        break;
    }
    case Kind::Brusselator: {
        const double a = w[0], b = w[1];
        const double r = 2.0 * u[0] * a * b + a * a * (u[1] + b);
        out[0] = r;
        out[1] = -r;
        break;
    }
    case Kind::Nagumo: {
        const double a = w[0];
        out[0] = a * a * ((1.0 + p0_) - 3.0 * u[0] - a);
        break;
    }
    }
}

void ReactionModel::jacobian_inplace(const double* u, double* out) const noexcept {
    switch (kind_) {
    case Kind::RealGinzburgLandau: {
        const double a = u[0], b = u[1];
        out[0] = 1.0 - 3.0 * a * a - b * b;
        out[1] = -2.0 * a * b;
        out[2] = -2.0 * a * b;
        out[3] = 1.0 - a * a - 3.0 * b * b;
        break;
    }
    case Kind::Brusselator: {
        const double a = u[0], b = u[1];
        out[0] = -(p1_ + 1.0) + 2.0 * a * b;
        out[1] = a * a;
        out[2] = p1_ - 2.0 * a * b;
        out[3] = -a * a;
        break;
    }
    case Kind::Nagumo: {
        const double x = u[0];
        // d/dx [x(1-x)(x-alpha)] = -3x^2 + 2(1+alpha)x - alpha
        out[0] = -3.0 * x * x + 2.0 * (1.0 + p0_) * x - p0_;
        break;
    }
    }
}

Eigen::VectorXd ReactionModel::f(const Eigen::Ref<const Eigen::VectorXd>& u) const {
    if (u.size() != n_) throw ArgumentError("state has length " + std::to_string(u.size()) + ", model '" + id_ + "' expects " + std::to_string(n_));
    Eigen::VectorXd out(n_);
    Eigen::VectorXd uc = u;
    f_inplace(uc.data(), out.data());
    return out;
}

Eigen::MatrixXd ReactionModel::jacobian(const Eigen::Ref<const Eigen::VectorXd>& u) const {
    if (u.size() != n_) throw ArgumentError("state has length " + std::to_string(u.size()) + ", model '" + id_ + "' expects " + std::to_string(n_));
    Eigen::VectorXd uc = u;
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(n_, n_);
    jacobian_inplace(uc.data(), out.data());
    return out;
}

Eigen::VectorXd eval_f(const ReactionModel& model, const Eigen::Ref<const Eigen::VectorXd>& u) { return model.f(u); }

Eigen::MatrixXd eval_jacobian(const ReactionModel& model, const Eigen::Ref<const Eigen::VectorXd>& u) {
    return model.jacobian(u);
}

}  // namespace subharm
