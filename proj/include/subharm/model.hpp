#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>

namespace subharm {

using ParamMap = std::map<std::string, double>;

/// A polynomial reaction term f: R^n -> R^n with hand-coded Jacobian.
///
/// Built-ins:
///   rgl          n=2, f(u) = (1 - |u|^2) u   (real form of u_t = u_xx + u - |u|^2 u)
///                param q in (0,1) selects the wave train with k = q / (2 pi);
///                it does not enter f.
///   brusselator  n=2, f(u,v) = (A - (B+1) u + u^2 v, B u - u^2 v), A > 0, B > 0
///   nagumo       n=1, f(u) = u (1 - u) (u - alpha), 0 < alpha < 1
class ReactionModel {
public:
    enum class Kind { RealGinzburgLandau, Brusselator, Nagumo };

    static ReactionModel real_gl(double q = 0.3);
    static ReactionModel brusselator(double a, double b);
    static ReactionModel nagumo(double alpha);

    /// Builds a model from an id token ("rgl"/"realGL", "brusselator", "nagumo")
    /// and parameter overrides; unknown ids or keys throw ArgumentError.
    static ReactionModel from_id(const std::string& id, const ParamMap& params = {});

    const std::string& id() const noexcept { return id_; }
    Kind kind() const noexcept { return kind_; }
    int n() const noexcept { return n_; }
    const ParamMap& params() const noexcept { return params_; }
    double param(const std::string& name) const;
    bool has_param(const std::string& name) const { return params_.count(name) != 0; }

    /// Copy with one parameter replaced (re-validated).
    ReactionModel with_param(const std::string& name, double value) const;

    Eigen::VectorXd f(const Eigen::Ref<const Eigen::VectorXd>& u) const;
    Eigen::MatrixXd jacobian(const Eigen::Ref<const Eigen::VectorXd>& u) const;

    // Allocation-free pointwise kernels for inner loops; out has length n / n*n (row-major).
    void f_inplace(const double* u, double* out) const noexcept;
    void jacobian_inplace(const double* u, double* out) const noexcept;
    /// f(u + w) - f(u) - Df(u) w, expanded so that small w loses no digits to cancellation.
    void remainder_inplace(const double* u, const double* w, double* out) const noexcept;

private:
    ReactionModel(std::string id, Kind kind, int n, ParamMap params);
    void validate() const;

    std::string id_;
    Kind kind_;
    int n_;
    ParamMap params_;
    // cached parameters
    double p0_ = 0.0;
    double p1_ = 0.0;
};

Eigen::VectorXd eval_f(const ReactionModel& model, const Eigen::Ref<const Eigen::VectorXd>& u);
Eigen::MatrixXd eval_jacobian(const ReactionModel& model, const Eigen::Ref<const Eigen::VectorXd>& u);

}  // namespace subharm
