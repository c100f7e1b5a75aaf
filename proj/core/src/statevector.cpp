#include "qassert/statevector.hpp"

#include <algorithm>
#include <cmath>

namespace qassert::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

ShotRng::ShotRng(std::uint64_t master_seed, std::uint64_t shot_index) {
    // Mix seed and shot index so neighbouring shots get unrelated streams.
    std::uint64_t s = master_seed;
    std::uint64_t a = splitmix64(s);
    s = shot_index ^ 0xda3e39cb94b95bdbULL;
    std::uint64_t b = splitmix64(s);
    state_ = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    (void)next_u64(); // discard one output to decorrelate the mix
}

std::uint64_t ShotRng::next_u64() { return splitmix64(state_); }

double ShotRng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

GateMatrix GateMatrix::dagger() const {
    GateMatrix g;
    g.dim = dim;
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            g.set(r, c, std::conj(at(c, r)));
        }
    }
    return g;
}

bool GateMatrix::is_unitary(double tol) const {
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            cplx acc = 0.0;
            for (int k = 0; k < dim; ++k) {
                acc += at(r, k) * std::conj(at(c, k));
            }
            const cplx want = (r == c) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            if (std::abs(acc - want) > tol) return false;
        }
    }
    return true;
}

bool GateMatrix::is_diagonal() const {
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            if (r != c && std::abs(at(r, c)) != 0.0) return false;
        }
    }
    return true;
}

std::string Bitstring::str() const {
    std::string s(static_cast<std::size_t>(width), '0');
    for (int i = 0; i < width; ++i) {
        if (bit(i)) s[static_cast<std::size_t>(width - 1 - i)] = '1';
    }
    return s;
}

StateVector::StateVector(int num_qubits, int max_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1) {
        throw UsageError("StateVector: need at least one qubit");
    }
    if (num_qubits > max_qubits) {
        throw ResourceError("StateVector: " + std::to_string(num_qubits) +
                            " qubits exceeds the limit of " + std::to_string(max_qubits));
    }
    amps_.assign(std::uint64_t{1} << num_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

double StateVector::norm_sq() const {
    double n = 0.0;
    for (const cplx& a : amps_) n += std::norm(a);
    return n;
}

void StateVector::apply(const GateMatrix& gate, std::span<const int> targets,
                        std::span<const int> controls) {
    const int want_targets = gate.dim == 2 ? 1 : 2;
    if (gate.dim != 2 && gate.dim != 4) {
        throw UsageError("apply: gate dimension must be 2 or 4");
    }
    if (static_cast<int>(targets.size()) != want_targets) {
        throw UsageError("apply: gate dimension does not match target count");
    }
    std::uint64_t seen = 0;
    for (int q : targets) {
        if (q < 0 || q >= num_qubits_) throw UsageError("apply: target index out of range");
        const std::uint64_t bit = std::uint64_t{1} << q;
        if (seen & bit) throw UsageError("apply: duplicate target qubit");
        seen |= bit;
    }
    std::uint64_t cmask = 0;
    for (int q : controls) {
        if (q < 0 || q >= num_qubits_) throw UsageError("apply: control index out of range");
        const std::uint64_t bit = std::uint64_t{1} << q;
        if (seen & bit) throw UsageError("apply: control overlaps target or another control");
        seen |= bit;
        cmask |= bit;
    }
    if (!gate.is_unitary(1e-10)) {
        throw UsageError("apply: gate is not unitary");
    }

    const std::uint64_t n = amps_.size();

    if (gate.dim == 2) {
        const std::uint64_t t = std::uint64_t{1} << targets[0];
        if (gate.is_diagonal()) {
            const cplx d0 = gate.at(0, 0), d1 = gate.at(1, 1);
            for (std::uint64_t k = 0; k < n; ++k) {
                if ((k & cmask) != cmask) continue;
                amps_[k] *= (k & t) ? d1 : d0;
            }
            return;
        }
        const cplx m00 = gate.at(0, 0), m01 = gate.at(0, 1);
        const cplx m10 = gate.at(1, 0), m11 = gate.at(1, 1);
        for (std::uint64_t k = 0; k < n; ++k) {
            if ((k & t) || (k & cmask) != cmask) continue;
            const std::uint64_t k1 = k | t;
            const cplx x0 = amps_[k], x1 = amps_[k1];
            amps_[k] = m00 * x0 + m01 * x1;
            amps_[k1] = m10 * x0 + m11 * x1;
        }
        return;
    }

    // Two-target gate; targets[0] is the low bit of the 2-bit gate index.
    const std::uint64_t t0 = std::uint64_t{1} << targets[0];
    const std::uint64_t t1 = std::uint64_t{1} << targets[1];
    for (std::uint64_t k = 0; k < n; ++k) {
        if ((k & t0) || (k & t1) || (k & cmask) != cmask) continue;
        std::uint64_t idx[4] = {k, k | t0, k | t1, k | t0 | t1};
        cplx x[4];
        for (int i = 0; i < 4; ++i) x[i] = amps_[idx[i]];
        for (int r = 0; r < 4; ++r) {
            cplx acc = 0.0;
            for (int c = 0; c < 4; ++c) acc += gate.at(r, c) * x[c];
            amps_[idx[r]] = acc;
        }
    }
}

void StateVector::check_norm() const {
    const double n = norm_sq();
    if (std::fabs(n - 1.0) > 1e-6) {
        throw InternalError("state norm drifted to " + std::to_string(n));
    }
}

std::uint64_t StateVector::sample_index(double u) const {
    // Inverse-CDF over |amp|^2, scaled by the actual total so rounding noise
    // cannot push u past the last outcome.
    const double total = norm_sq();
    double target = u * total;
    double acc = 0.0;
    const std::uint64_t n = amps_.size();
    for (std::uint64_t k = 0; k < n; ++k) {
        acc += std::norm(amps_[k]);
        if (target < acc) return k;
    }
    return n - 1;
}

Bitstring StateVector::measure_shot(ShotRng& rng) const {
    check_norm();
    return Bitstring{num_qubits_, sample_index(rng.next_unit())};
}

std::vector<std::uint64_t> StateVector::sample_shots(int shots, std::uint64_t seed) const {
    if (shots < 1) throw UsageError("sample_shots: need at least one shot");
    check_norm();

    // Cumulative distribution once, then one binary search per shot.
    const std::uint64_t n = amps_.size();
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        acc += std::norm(amps_[k]);
        cdf[k] = acc;
    }
    const double total = acc;

    std::vector<std::uint64_t> out(static_cast<std::size_t>(shots));
    for (int s = 0; s < shots; ++s) {
        ShotRng rng(seed, static_cast<std::uint64_t>(s));
        const double target = rng.next_unit() * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
        out[static_cast<std::size_t>(s)] =
            it == cdf.end() ? n - 1 : static_cast<std::uint64_t>(it - cdf.begin());
    }
    return out;
}

stats::Histogram StateVector::sample_histogram(int shots, std::uint64_t seed) const {
    stats::Histogram h;
    for (std::uint64_t outcome : sample_shots(shots, seed)) {
        h.add(outcome);
    }
    return h;
}

} // namespace qassert::sim
