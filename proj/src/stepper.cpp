#include "foswe/stepper.hpp"

#include <cstdio>
#include <cstring>

namespace foswe {

Stepper::Stepper(Discretization disc) : disc_(std::move(disc)) {}

StageEval Stepper::eval_stage(const SystemState& s, const StageEval* prev) const {
    const NTGrid& ge = *disc_.grid_ext;
    const NTGrid& gi = *disc_.grid_int;
    const PhysicsParams& phys = disc_.physics;

    tube_check(s.line, disc_.hanzawa.eta0, disc_.curve.tube_halfwidth);

    StageEval ev;
    ev.d_ext = std::make_shared<DiffeoField>(build_diffeo(ge, s.line, disc_.hanzawa));
    ev.d_int = std::make_shared<DiffeoField>(build_diffeo(gi, s.line, disc_.hanzawa));
    ev.op = std::make_shared<EllipticOperator>(gi, *ev.d_int, disc_.obstacle);
    const InteriorState* warm = prev ? prev->interior.get() : nullptr;
    ev.interior = std::make_shared<InteriorState>(
        solve_interior(*ev.op, *ev.d_int, disc_.obstacle, s.psi, warm));
    ev.interior->t = s.t;

    // Characteristic boundary correction of the exterior state.
    ev.corrected = s;
    ContactRingData ring;
    const size_t ring_i = gi.nr() - 1;
    ring.zeta_i.resize(ge.ns());
    ring.flux = ev.interior->dn;
    ring.v_tan_i.resize(ge.ns());
    ring.has_vtan = true;
    for (size_t j = 0; j < ge.ns(); ++j) {
        ring.zeta_i[j] = ev.interior->zeta(ring_i, j);
        Vec2 n = ev.d_ext->Nphi.at(0, j) / ev.d_ext->Nphi_len(0, j);
        ring.v_tan_i[j] = n.perp().dot(ev.interior->v.at(ring_i, j));
    }
    characteristic_bc(ev.corrected.ext, *ev.d_ext, phys, ring, disc_.exterior.outer);

    ev.trace = extract_trace(ev.corrected.ext, *ev.d_ext, *ev.interior, *ev.d_int, phys);
    ev.transv_min = transversality(ev.trace);
    ev.dgamma = gamma_rhs(ev.trace, phys.c0);
    ev.corrected.line.dgamma_dt = ev.dgamma;

    // Stage-consistent chart velocity from the fresh gamma rate.
    ev.d_ext->set_time_derivative(ev.dgamma);
    ev.d_int->set_time_derivative(ev.dgamma);
    for (size_t j = 0; j < ge.ns(); ++j) ev.trace.dphi_dt[j] = ev.d_ext->dphi_dt.at(0, j);

    ev.tend = ExteriorTendencies(ge.nr(), ge.ns());
    ev.subcrit_min = rhs_exterior(ev.corrected.ext, *ev.d_ext, phys,
                                  disc_.exterior.velocity_form, ev.tend);
    if (ev.subcrit_min <= 0.0)
        throw SimError(ErrorCode::SubcriticalViolated,
                       "subcriticality lost: min(g h - |w|^2) <= 0");
    ev.dpsi = psi_rhs(ev.trace, phys.g);
    return ev;
}

double Stepper::cfl_dt(const StageEval& e) const {
    return foswe::cfl_dt(e.corrected.ext, *e.d_ext, disc_.physics, disc_.exterior.cfl);
}

SystemState Stepper::axpy(const SystemState& base, const StageEval& eval, double dt) const {
    SystemState out = base;
    const size_t ns = base.line.ns();
    for (size_t j = 0; j < ns; ++j) {
        out.line.gamma[j] += dt * eval.dgamma[j];
        out.psi[j] += dt * eval.dpsi[j];
    }
    out.line.dgamma_dt = eval.dgamma;
    for (size_t i = 0; i < base.ext.nr(); ++i)
        for (size_t j = 0; j < ns; ++j) {
            out.ext.zeta(i, j) += dt * eval.tend.dzeta(i, j);
            out.ext.v.x(i, j) += dt * eval.tend.dv.x(i, j);
            out.ext.v.y(i, j) += dt * eval.tend.dv.y(i, j);
        }
    out.t = base.t + dt;
    return out;
}

void Stepper::filter(SystemState& s) const {
    filter_state(*disc_.grid_ext, disc_.exterior, s.ext);
    const Spectral& sp = disc_.grid_ext->spectral();
    auto mult = sp.exp_filter_multipliers(disc_.exterior.filter_cutoff,
                                          disc_.exterior.filter_alpha);
    sp.apply_multiplier(s.line.gamma.data(), s.line.gamma.data(), mult);
    sp.apply_multiplier(s.psi.data(), s.psi.data(), mult);
}

SystemState Stepper::advance(const SystemState& s, double dt, StageEval& cache) const {
    // cache must hold eval_stage(s); stage 1 from it, stage 2 fresh.
    const StageEval& e0 = cache;
    SystemState u1 = axpy(e0.corrected, e0, dt);
    StageEval e1 = eval_stage(u1, &e0);
    SystemState u2 = axpy(e1.corrected, e1, dt);

    // SSP-RK2 combine: u^{n+1} = (u^n + u2)/2.
    SystemState out = e0.corrected;
    const size_t ns = s.line.ns();
    for (size_t j = 0; j < ns; ++j) {
        out.line.gamma[j] = 0.5 * (e0.corrected.line.gamma[j] + u2.line.gamma[j]);
        out.psi[j] = 0.5 * (e0.corrected.psi[j] + u2.psi[j]);
    }
    for (size_t i = 0; i < s.ext.nr(); ++i)
        for (size_t j = 0; j < ns; ++j) {
            out.ext.zeta(i, j) = 0.5 * (e0.corrected.ext.zeta(i, j) + u2.ext.zeta(i, j));
            out.ext.v.x(i, j) = 0.5 * (e0.corrected.ext.v.x(i, j) + u2.ext.v.x(i, j));
            out.ext.v.y(i, j) = 0.5 * (e0.corrected.ext.v.y(i, j) + u2.ext.v.y(i, j));
        }
    filter(out);
    out.t = s.t + dt;
    out.step = s.step + 1;
    out.line.dgamma_dt = e1.dgamma;

    cache = eval_stage(out, &e1);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void write_block(std::FILE* f, const double* data, size_t n) {
    if (std::fwrite(data, sizeof(double), n, f) != n)
        throw SimError(ErrorCode::SolveFailed, "checkpoint write failed");
}

void read_block(std::FILE* f, double* data, size_t n) {
    if (std::fread(data, sizeof(double), n, f) != n)
        throw SimError(ErrorCode::SolveFailed, "checkpoint read failed");
}

} // namespace

void save_checkpoint(const std::string& path, const Checkpoint& chk) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw SimError(ErrorCode::SolveFailed, "cannot open checkpoint for writing: " + path);
    const char magic[8] = {'F', 'O', 'S', 'W', 'E', '1', 0, 0};
    std::fwrite(magic, 1, 8, f);
    uint64_t dims[5] = {chk.state.ext.nr(), chk.state.ext.ns(),
                        chk.has_phi_prev ? chk.phi_prev.nr() : 0,
                        static_cast<uint64_t>(chk.state.step),
                        chk.has_phi_prev ? 1ull : 0ull};
    std::fwrite(dims, sizeof(uint64_t), 5, f);
    double scalars[3] = {chk.state.t, chk.phi_prev_pole, chk.phi_prev_t};
    std::fwrite(scalars, sizeof(double), 3, f);

    const SystemState& s = chk.state;
    write_block(f, s.line.gamma.data(), s.line.gamma.size());
    write_block(f, s.line.dgamma_dt.data(), s.line.dgamma_dt.size());
    write_block(f, s.psi.data(), s.psi.size());
    write_block(f, s.ext.zeta.data(), s.ext.zeta.size());
    write_block(f, s.ext.v.x.data(), s.ext.v.x.size());
    write_block(f, s.ext.v.y.data(), s.ext.v.y.size());
    if (chk.has_phi_prev) write_block(f, chk.phi_prev.data(), chk.phi_prev.size());
    std::fclose(f);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw SimError(ErrorCode::SolveFailed, "cannot open checkpoint: " + path);
    char magic[8];
    if (std::fread(magic, 1, 8, f) != 8 || std::memcmp(magic, "FOSWE1", 6) != 0) {
        std::fclose(f);
        throw SimError(ErrorCode::SolveFailed, "bad checkpoint magic");
    }
    uint64_t dims[5];
    double scalars[3];
    if (std::fread(dims, sizeof(uint64_t), 5, f) != 5 ||
        std::fread(scalars, sizeof(double), 3, f) != 3) {
        std::fclose(f);
        throw SimError(ErrorCode::SolveFailed, "bad checkpoint header");
    }
    Checkpoint chk;
    size_t nr = dims[0], ns = dims[1], nri = dims[2];
    chk.state.step = static_cast<long>(dims[3]);
    chk.has_phi_prev = dims[4] != 0;
    chk.state.t = scalars[0];
    chk.phi_prev_pole = scalars[1];
    chk.phi_prev_t = scalars[2];
    chk.state.line.gamma.resize(ns);
    chk.state.line.dgamma_dt.resize(ns);
    chk.state.psi.resize(ns);
    chk.state.ext = ExteriorState(nr, ns);
    chk.state.ext.t = chk.state.t;
    read_block(f, chk.state.line.gamma.data(), ns);
    read_block(f, chk.state.line.dgamma_dt.data(), ns);
    read_block(f, chk.state.psi.data(), ns);
    read_block(f, chk.state.ext.zeta.data(), nr * ns);
    read_block(f, chk.state.ext.v.x.data(), nr * ns);
    read_block(f, chk.state.ext.v.y.data(), nr * ns);
    if (chk.has_phi_prev) {
        chk.phi_prev = Field(nri, ns);
        read_block(f, chk.phi_prev.data(), nri * ns);
    }
    std::fclose(f);
    return chk;
}

} // namespace foswe
