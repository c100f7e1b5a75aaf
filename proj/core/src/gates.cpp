#include "qassert/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qassert/errors.hpp"

namespace qassert::gates {

namespace {

using sim::cplx;
using sim::GateMatrix;

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_disjoint(std::span<const int> a, std::span<const int> b, const char* what) {
    for (int qa : a) {
        for (int qb : b) {
            if (qa == qb) throw UsageError(std::string("overlapping qubit operands: ") + what);
        }
    }
}

} // namespace

sim::GateMatrix elementary(Gate g, double theta) {
    GateMatrix m;
    m.dim = 2;
    switch (g) {
    case Gate::X:
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0);
        break;
    case Gate::H:
        m.set(0, 0, kInvSqrt2);
        m.set(0, 1, kInvSqrt2);
        m.set(1, 0, kInvSqrt2);
        m.set(1, 1, -kInvSqrt2);
        break;
    case Gate::Z:
        m.set(0, 0, 1.0);
        m.set(1, 1, -1.0);
        break;
    case Gate::Rz:
        if (!std::isfinite(theta)) throw UsageError("elementary: rotation angle must be finite");
        m.set(0, 0, std::exp(cplx{0.0, -0.5 * theta}));
        m.set(1, 1, std::exp(cplx{0.0, 0.5 * theta}));
        break;
    case Gate::Phase:
        if (!std::isfinite(theta)) throw UsageError("elementary: rotation angle must be finite");
        m.set(0, 0, 1.0);
        m.set(1, 1, std::exp(cplx{0.0, theta}));
        break;
    }
    return m;
}

CircuitFragment CircuitFragment::inverse() const {
    CircuitFragment inv;
    inv.ops.reserve(ops.size());
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        Op op = *it;
        if (op.g == Gate::Rz || op.g == Gate::Phase) {
            op.angle = op.angle.negated();
        }
        inv.ops.push_back(std::move(op));
    }
    return inv;
}

void CircuitFragment::apply_to(sim::StateVector& state) const {
    for (const Op& op : ops) {
        state.apply(elementary(op.g, op.angle.radians()), op.targets, op.controls);
    }
}

void CircuitFragment::append(const CircuitFragment& other) {
    ops.insert(ops.end(), other.ops.begin(), other.ops.end());
}

void CircuitFragment::add(Gate g, std::initializer_list<int> targets,
                          std::initializer_list<int> controls) {
    Op op;
    op.g = g;
    op.targets.assign(targets);
    op.controls.assign(controls);
    ops.push_back(std::move(op));
}

void CircuitFragment::add_rot(Angle angle, int target, std::span<const int> controls) {
    Op op;
    op.angle = angle;
    op.targets = {target};
    if (controls.empty()) {
        op.g = Gate::Rz;
    } else if (controls.size() == 2 && controls[0] == controls[1]) {
        // Duplicated control pair: the V-chain decomposition collapses, its
        // control-to-control CNOTs become self-inverse pairs, and what
        // survives is the half-angle rotation on the shared control.
        op.g = Gate::Phase;
        op.angle = angle.half();
        op.controls = {controls[0]};
    } else if (controls.size() <= 2) {
        op.g = Gate::Phase;
        op.controls.assign(controls.begin(), controls.end());
    } else {
        throw UsageError("rotations support at most two control qubits");
    }
    ops.push_back(std::move(op));
}

CircuitFragment crz_decomposed(int control, int target, Angle theta, CrzVariant variant) {
    if (control == target) throw UsageError("crz_decomposed: control equals target");
    const Angle half = theta.half();
    CircuitFragment f;
    switch (variant) {
    case CrzVariant::DropA:
        f.add_rot(half, target, {});
        f.add(Gate::X, {target}, {control});
        f.add_rot(half.negated(), target, {});
        f.add(Gate::X, {target}, {control});
        f.add_rot(half, control, {});
        break;
    case CrzVariant::DropC:
        f.add(Gate::X, {target}, {control});
        f.add_rot(half.negated(), target, {});
        f.add(Gate::X, {target}, {control});
        f.add_rot(half, target, {});
        f.add_rot(half, control, {});
        break;
    case CrzVariant::FlippedBuggy:
        f.add_rot(half.negated(), target, {});
        f.add(Gate::X, {target}, {control});
        f.add_rot(half, target, {});
        f.add(Gate::X, {target}, {control});
        f.add_rot(half, control, {});
        break;
    }
    return f;
}

namespace {

struct QftUnit {
    bool is_h = true;
    int target = 0;
    int control = 0;
    Angle angle;
};

std::vector<QftUnit> qft_units(std::span<const int> qubits, bool inverse) {
    std::vector<QftUnit> units;
    const int w = static_cast<int>(qubits.size());
    for (int j = w - 1; j >= 0; --j) {
        units.push_back({true, qubits[j], 0, Angle{}});
        for (int i = j - 1; i >= 0; --i) {
            QftUnit u;
            u.is_h = false;
            u.control = qubits[i];
            u.target = qubits[j];
            u.angle = Angle::pi_over_pow2(j - i);
            units.push_back(u);
        }
    }
    if (inverse) {
        std::reverse(units.begin(), units.end());
        for (QftUnit& u : units) {
            if (!u.is_h) u.angle = u.angle.negated();
        }
    }
    return units;
}

} // namespace

CircuitFragment qft(std::span<const int> qubits, bool inverse, RotStyle style) {
    if (qubits.empty()) throw UsageError("qft: empty register");
    CircuitFragment f;
    for (const QftUnit& u : qft_units(qubits, inverse)) {
        if (u.is_h) {
            f.add(Gate::H, {u.target});
        } else if (style == RotStyle::Native) {
            int ctl[1] = {u.control};
            f.add_rot(u.angle, u.target, ctl);
        } else {
            f.append(crz_decomposed(u.control, u.target, u.angle, CrzVariant::DropA));
        }
    }
    return f;
}

CircuitFragment cadd(std::span<const int> controls, std::span<const int> b, std::uint64_t a,
                     bool inverse) {
    if (controls.size() > 2) {
        throw UsageError("cadd: at most two control qubits");
    }
    const int w = static_cast<int>(b.size());
    if (a >> w) {
        throw UsageError("cadd: constant does not fit the register width");
    }
    CircuitFragment f;
    auto rotate = [&](int b_indx, int a_indx) {
        if (((a >> a_indx) & 1u) == 0) return;
        Angle angle = Angle::pi_over_pow2(b_indx - a_indx, inverse);
        f.add_rot(angle, b[b_indx], controls);
    };
    if (!inverse) {
        for (int b_indx = w - 1; b_indx >= 0; --b_indx) {
            for (int a_indx = b_indx; a_indx >= 0; --a_indx) {
                rotate(b_indx, a_indx);
            }
        }
    } else {
        for (int b_indx = 0; b_indx < w; ++b_indx) {
            for (int a_indx = 0; a_indx <= b_indx; ++a_indx) {
                rotate(b_indx, a_indx);
            }
        }
    }
    return f;
}

namespace {

// Doubly controlled modular adder on a Fourier-encoded register:
// b <- (b + a) mod N when every control reads 1, using the top qubit of b as
// an overflow flag and one ancilla for the comparison, both uncomputed.
// Requires a < N, register value < N, and N < 2^(w-1).
void add_const_mod(CircuitFragment& f, std::span<const int> controls, std::span<const int> b,
                   std::uint64_t a, std::uint64_t N, int ancilla) {
    const int w = static_cast<int>(b.size());
    const int sign = b[w - 1];
    int anc_ctl[1] = {ancilla};

    f.append(cadd(controls, b, a));
    f.append(cadd({}, b, N, /*inverse=*/true));
    f.append(qft(b, /*inverse=*/true));
    f.add(Gate::X, {ancilla}, {sign});
    f.append(qft(b));
    f.append(cadd(anc_ctl, b, N));
    f.append(cadd(controls, b, a, /*inverse=*/true));
    f.append(qft(b, /*inverse=*/true));
    f.add(Gate::X, {sign});
    f.add(Gate::X, {ancilla}, {sign});
    f.add(Gate::X, {sign});
    f.append(qft(b));
    f.append(cadd(controls, b, a));
}

} // namespace

CircuitFragment cmodmul(int ctrl, std::uint64_t a, std::span<const int> x,
                        std::span<const int> b, std::uint64_t N, int ancilla, bool inverse,
                        bool enforce_invertible, bool ctrl_routing_bug) {
    if (N < 2) throw UsageError("cmodmul: modulus must be at least 2");
    const int w = static_cast<int>(b.size());
    if ((std::uint64_t{1} << (w - 1)) < N) {
        throw UsageError("cmodmul: register needs width >= bits(N)+1");
    }
    if (enforce_invertible && std::gcd(a % N, N) != 1) {
        throw UsageError("cmodmul: multiplier is not invertible mod N");
    }
    require_disjoint(x, b, "cmodmul x/b");
    int singles[2] = {ctrl, ancilla};
    require_disjoint(singles, x, "cmodmul ctrl/ancilla vs x");
    require_disjoint(singles, b, "cmodmul ctrl/ancilla vs b");
    if (ctrl == ancilla) throw UsageError("cmodmul: ctrl equals ancilla");

    CircuitFragment f;
    f.append(qft(b));
    std::uint64_t term = a % N;
    for (std::size_t i = 0; i < x.size(); ++i) {
        int cc[2];
        if (ctrl_routing_bug) {
            cc[0] = x[i]; // ctrl1 used twice instead of ctrl0
            cc[1] = x[i];
        } else {
            cc[0] = ctrl;
            cc[1] = x[i];
        }
        add_const_mod(f, cc, b, term, N, ancilla);
        term = (term * 2) % N;
    }
    f.append(qft(b, /*inverse=*/true));
    return inverse ? f.inverse() : f;
}

CircuitFragment cswap_registers(int ctrl, std::span<const int> x, std::span<const int> b) {
    if (x.size() != b.size()) throw UsageError("cswap_registers: width mismatch");
    CircuitFragment f;
    for (std::size_t i = 0; i < x.size(); ++i) {
        f.add(Gate::X, {x[i]}, {b[i]});
        f.add(Gate::X, {b[i]}, {ctrl, x[i]});
        f.add(Gate::X, {x[i]}, {b[i]});
    }
    return f;
}

CircuitFragment cmodexp(std::span<const int> upper, std::span<const int> x,
                        std::span<const int> b, std::uint64_t a, std::uint64_t N, int ancilla,
                        std::span<const std::uint64_t> inverses) {
    if (inverses.size() < upper.size()) {
        throw UsageError("cmodexp: need one inverse constant per upper qubit");
    }
    CircuitFragment f;
    std::uint64_t ak = a % N;
    for (std::size_t k = 0; k < upper.size(); ++k) {
        // Stage k runs on the (n-1-k)-th upper qubit so the final inverse
        // Fourier transform reads the eigenphase in standard bit order.
        const int ctl = upper[upper.size() - 1 - k];
        f.append(cmodmul(ctl, ak, x, b, N, ancilla));
        f.append(cswap_registers(ctl, x, b));
        // The supplied inverse is used verbatim; a wrong pair leaves the
        // scratch register entangled, which is the point of the checks.
        f.append(cmodmul(ctl, inverses[k] % N, x, b, N, ancilla, /*inverse=*/true,
                         /*enforce_invertible=*/false));
        ak = (ak * ak) % N;
    }
    return f;
}

CircuitFragment grover_diffusion(std::span<const int> q, std::span<const int> ancilla) {
    const int n = static_cast<int>(q.size());
    if (n < 2) throw UsageError("grover_diffusion: need at least two search qubits");
    if (static_cast<int>(ancilla.size()) < n - 1) {
        throw UsageError("grover_diffusion: ancilla register too small");
    }
    require_disjoint(q, ancilla, "grover q/ancilla");

    CircuitFragment f;
    for (int j = 0; j < n; ++j) f.add(Gate::H, {q[j]});
    for (int j = 0; j < n; ++j) f.add(Gate::X, {q[j]});

    f.add(Gate::X, {ancilla[0]}, {q[1], q[0]});
    for (int j = 1; j < n - 1; ++j) {
        f.add(Gate::X, {ancilla[j]}, {ancilla[j - 1], q[j + 1]});
    }
    f.add(Gate::Z, {q[n - 1]}, {ancilla[n - 2]});
    for (int j = n - 2; j > 0; --j) {
        f.add(Gate::X, {ancilla[j]}, {ancilla[j - 1], q[j + 1]});
    }
    f.add(Gate::X, {ancilla[0]}, {q[1], q[0]});

    for (int j = 0; j < n; ++j) f.add(Gate::X, {q[j]});
    for (int j = 0; j < n; ++j) f.add(Gate::H, {q[j]});
    return f;
}

CircuitFragment grover_oracle(std::span<const int> q, std::span<const int> ancilla,
                              std::uint64_t marked) {
    const int n = static_cast<int>(q.size());
    if (n < 2) throw UsageError("grover_oracle: need at least two search qubits");
    if (static_cast<int>(ancilla.size()) < n - 1) {
        throw UsageError("grover_oracle: ancilla register too small");
    }
    if (marked >> n) throw UsageError("grover_oracle: marked value out of range");

    CircuitFragment f;
    auto conjugate = [&] {
        for (int i = 0; i < n; ++i) {
            if (((marked >> i) & 1u) == 0) f.add(Gate::X, {q[i]});
        }
    };
    conjugate();
    f.add(Gate::X, {ancilla[0]}, {q[1], q[0]});
    for (int j = 1; j < n - 1; ++j) {
        f.add(Gate::X, {ancilla[j]}, {ancilla[j - 1], q[j + 1]});
    }
    f.add(Gate::Z, {q[n - 1]}, {ancilla[n - 2]});
    for (int j = n - 2; j > 0; --j) {
        f.add(Gate::X, {ancilla[j]}, {ancilla[j - 1], q[j + 1]});
    }
    f.add(Gate::X, {ancilla[0]}, {q[1], q[0]});
    conjugate();
    return f;
}

} // namespace qassert::gates
