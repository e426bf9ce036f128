#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <cstdint>

namespace rigpose {

/// Deterministic random generator (splitmix64 core). Unlike the standard
/// <random> distributions, every draw here is specified arithmetic, so
/// seeded runs reproduce bit-for-bit across compilers and platforms.
class Rng {
  public:
    explicit Rng(uint64_t seed) : seed_(seed), state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Derive an independent stream; does not disturb this generator.
    Rng fork(uint64_t stream) const {
        uint64_t z = seed_ ^ (0xD1B54A32D192ED03ull * (stream + 1));
        z = (z ^ (z >> 29)) * 0xFF51AFD7ED558CCDull;
        return Rng(z ^ (z >> 32));
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    int uniform_int(int n) { // [0, n)
        return static_cast<int>(next_u64() % static_cast<uint64_t>(n));
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    Eigen::Vector3d normal3() { return {normal(), normal(), normal()}; }

    Eigen::Vector3d unit_vector() {
        Eigen::Vector3d v = normal3();
        while (v.norm() < 1e-12) v = normal3();
        return v.normalized();
    }

    /// Haar-uniform rotation via a normalized random quaternion.
    Eigen::Matrix3d rotation() {
        Eigen::Vector4d q(normal(), normal(), normal(), normal());
        while (q.norm() < 1e-12) q = Eigen::Vector4d(normal(), normal(), normal(), normal());
        q.normalize();
        return Eigen::Quaterniond(q(0), q(1), q(2), q(3)).toRotationMatrix();
    }

    /// Random axis, rotation angle uniform in [0, max_deg].
    Eigen::Matrix3d rotation_max_angle(double max_deg) {
        const double angle = uniform(0.0, max_deg * M_PI / 180.0);
        return Eigen::AngleAxisd(angle, unit_vector()).toRotationMatrix();
    }

    /// Rz(c) * Ry(b) * Rx(a) with each angle uniform in [-max_deg, max_deg].
    Eigen::Matrix3d rotation_per_axis(double max_deg) {
        const double lim = max_deg * M_PI / 180.0;
        const double a = uniform(-lim, lim), b = uniform(-lim, lim), c = uniform(-lim, lim);
        return (Eigen::AngleAxisd(c, Eigen::Vector3d::UnitZ()) *
                Eigen::AngleAxisd(b, Eigen::Vector3d::UnitY()) *
                Eigen::AngleAxisd(a, Eigen::Vector3d::UnitX()))
            .toRotationMatrix();
    }

  private:
    uint64_t seed_;
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace rigpose
