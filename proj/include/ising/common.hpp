#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ising {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

enum class BC { Periodic, Antiperiodic };

inline BC opposite(BC b) { return b == BC::Periodic ? BC::Antiperiodic : BC::Periodic; }
inline int bc_sign(BC b) { return b == BC::Periodic ? 1 : -1; }
inline BC bc_from_sign(int s) { return s > 0 ? BC::Periodic : BC::Antiperiodic; }
inline const char* bc_name(BC b) { return b == BC::Periodic ? "periodic" : "antiperiodic"; }

struct LatticeSpec {
    int L = 2;
    int M = 2;
    double t1 = 0.5;
    double t2 = 0.5;
    BC tau = BC::Periodic;

    void validate() const;
    bool critical(double tol = 1e-9) const { return std::abs(t2 - (1 - t1) / (1 + t1)) < tol; }
    double K1() const { return std::atanh(t1); }
    double K2() const { return std::atanh(t2); }
    LatticeSpec with_tau(BC b) const {
        LatticeSpec s = *this;
        s.tau = b;
        return s;
    }

    static LatticeSpec isotropic_critical(int L, int M, BC tau = BC::Periodic) {
        double t = std::sqrt(2.0) - 1;
        return {L, M, t, t, tau};
    }
    static LatticeSpec critical_t1(int L, int M, double t1, BC tau = BC::Periodic) {
        return {L, M, t1, (1 - t1) / (1 + t1), tau};
    }
};

// log|x| with sign, sign == 0 encodes an exact zero
struct SignedLogValue {
    int sign = 0;
    double log_abs = 0;

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
    static SignedLogValue from(double x) {
        if (x == 0) return {0, 0};
        return {x > 0 ? 1 : -1, std::log(std::abs(x))};
    }
    SignedLogValue operator*(const SignedLogValue& o) const {
        return {sign * o.sign, log_abs + o.log_abs};
    }
};

enum class Side { Lower, Upper };

struct BoundarySite {
    int column = 0;
    Side side = Side::Lower;
    bool operator==(const BoundarySite&) const = default;
};

using BoundaryTuple = std::vector<BoundarySite>;

// "l:7,l:5,u:2"
BoundaryTuple parse_tuple(const std::string& text);
std::string format_tuple(const BoundaryTuple& t);

// Sort into the cyclic order: lower sites right to left, then upper sites left to right.
// Returns the sign of the permutation taking the input order to the cyclic one.
int cyclic_order(BoundaryTuple& t, int L);
void validate_tuple(const BoundaryTuple& t, int L);

inline double sqrt2() { return std::sqrt(2.0); }
inline double beta0() { return std::atanh(std::sqrt(2.0) - 1); }

}  // namespace ising
