// base.hpp: small shared pieces -- 2-vectors of conserved variables,
// error types, and a deterministic RNG used by generators and samplers.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace fronttrack {

// Conserved state (density, momentum). Doubles as a plain 2-vector for
// curve tangents, flux values and the like.
struct Vec2 {
    double rho = 0.0;
    double mom = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.rho + b.rho, a.mom + b.mom}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.rho - b.rho, a.mom - b.mom}; }
    friend Vec2 operator*(double t, Vec2 a) { return {t * a.rho, t * a.mom}; }
    friend Vec2 operator*(Vec2 a, double t) { return t * a; }
    friend Vec2 operator/(Vec2 a, double t) { return {a.rho / t, a.mom / t}; }
    Vec2& operator+=(Vec2 b) { rho += b.rho; mom += b.mom; return *this; }
    Vec2& operator-=(Vec2 b) { rho -= b.rho; mom -= b.mom; return *this; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.rho == b.rho && a.mom == b.mom; }
};

using State = Vec2;

inline double dot(Vec2 a, Vec2 b) { return a.rho * b.rho + a.mom * b.mom; }
inline double norm(Vec2 a) { return std::hypot(a.rho, a.mom); }
inline double norm_inf(Vec2 a) { return std::max(std::fabs(a.rho), std::fabs(a.mom)); }

// Configuration rejected at load time; the message names the first failing
// constraint.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Iteration did not converge, residual report in the message.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic uniform generator. Draws are derived from the raw 64-bit
// stream so that sequences are reproducible independent of the standard
// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    std::uint64_t bits() { return eng_(); }
    int index(int n) { return static_cast<int>(bits() % static_cast<std::uint64_t>(n)); }

    // Independent child stream, for per-worker determinism in sweeps.
    Rng split(std::uint64_t salt) { return Rng(bits() ^ (0x9e3779b97f4a7c15ull * (salt + 1))); }

private:
    std::mt19937_64 eng_;
};

}  // namespace fronttrack
