#include "foswe/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "foswe/coupling.hpp"

namespace foswe {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    double v;
    while (is >> v) out.push_back(v);
    return out;
}

} // namespace

RunConfig RunConfig::parse_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw SimError(ErrorCode::ConfigInvalid, "config line missing '=': " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        cfg.raw[key] = val;
    }

    auto getd = [&](const std::string& k, double& tgt) {
        auto it = cfg.raw.find(k);
        if (it != cfg.raw.end()) tgt = std::stod(it->second);
    };
    auto geti = [&](const std::string& k, auto& tgt) {
        auto it = cfg.raw.find(k);
        if (it != cfg.raw.end()) tgt = static_cast<std::decay_t<decltype(tgt)>>(std::stol(it->second));
    };
    auto gets = [&](const std::string& k, std::string& tgt) {
        auto it = cfg.raw.find(k);
        if (it != cfg.raw.end()) tgt = it->second;
    };
    auto gete = [&](const std::string& k, Expr& tgt) {
        auto it = cfg.raw.find(k);
        if (it != cfg.raw.end()) tgt = Expr::parse(it->second);
    };

    getd("physics.g", cfg.g);
    getd("physics.H0", cfg.H0);
    getd("physics.rho", cfg.rho);
    getd("physics.P_atm", cfg.p_atm);
    getd("geometry.R0", cfg.R0);
    cfg.r0 = cfg.R0 / 2.0;
    getd("geometry.r0", cfg.r0);
    getd("geometry.R_ext", cfg.R_ext);
    geti("geometry.Nr_int", cfg.Nr_int);
    geti("geometry.Nr_ext", cfg.Nr_ext);
    geti("geometry.Ns", cfg.Ns);
    getd("geometry.int_stretch", cfg.int_stretch);
    geti("geometry.radial_order", cfg.radial_order);
    geti("geometry.int_radial_order", cfg.int_radial_order);
    gets("obstacle.profile", cfg.obstacle_profile);
    getd("obstacle.amplitude", cfg.obstacle_amplitude);
    getd("obstacle.sigma", cfg.obstacle_sigma);
    gete("initial.zeta0", cfg.zeta0);
    gete("initial.v0_x", cfg.v0_x);
    gete("initial.v0_y", cfg.v0_y);
    gete("initial.psi0", cfg.psi0);
    if (auto it = cfg.raw.find("initial.gamma0"); it != cfg.raw.end())
        cfg.gamma0_coeffs = parse_doubles(it->second);
    getd("numerics.CFL", cfg.cfl);
    getd("numerics.T_end", cfg.T_end);
    getd("numerics.filter_cutoff", cfg.filter_cutoff);
    getd("numerics.filter_alpha", cfg.filter_alpha);
    getd("numerics.eta0", cfg.eta0);
    getd("numerics.c0", cfg.c0);
    getd("numerics.eps", cfg.eps_override);
    gets("numerics.outer_bc", cfg.outer_bc);
    gets("numerics.velocity_form", cfg.velocity_form);
    gets("output.dir", cfg.output_dir);
    geti("output.cadence", cfg.diag_cadence);
    if (auto it = cfg.raw.find("output.snapshots"); it != cfg.raw.end())
        cfg.snapshots = (it->second == "1" || it->second == "true" || it->second == "on");
    geti("output.snapshot_cadence", cfg.snapshot_cadence);
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SimError(ErrorCode::ConfigInvalid, "cannot open config: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_text(ss.str());
}

std::string RunConfig::serialize() const {
    std::ostringstream os;
    os.precision(17);
    os << "physics.g = " << g << "\nphysics.H0 = " << H0 << "\nphysics.rho = " << rho
       << "\nphysics.P_atm = " << p_atm << "\ngeometry.R0 = " << R0 << "\ngeometry.r0 = " << r0
       << "\ngeometry.R_ext = " << R_ext << "\ngeometry.Nr_int = " << Nr_int
       << "\ngeometry.Nr_ext = " << Nr_ext << "\ngeometry.Ns = " << Ns
       << "\ngeometry.int_stretch = " << int_stretch
       << "\ngeometry.radial_order = " << radial_order
       << "\ngeometry.int_radial_order = " << int_radial_order
       << "\nobstacle.profile = " << obstacle_profile
       << "\nobstacle.amplitude = " << obstacle_amplitude
       << "\nobstacle.sigma = " << obstacle_sigma << "\n";
    if (zeta0.valid()) os << "initial.zeta0 = " << zeta0.text() << "\n";
    if (v0_x.valid()) os << "initial.v0_x = " << v0_x.text() << "\n";
    if (v0_y.valid()) os << "initial.v0_y = " << v0_y.text() << "\n";
    if (psi0.valid()) os << "initial.psi0 = " << psi0.text() << "\n";
    if (!gamma0_coeffs.empty()) {
        os << "initial.gamma0 =";
        for (double c : gamma0_coeffs) os << " " << c;
        os << "\n";
    }
    os << "numerics.CFL = " << cfl << "\nnumerics.T_end = " << T_end
       << "\nnumerics.filter_cutoff = " << filter_cutoff
       << "\nnumerics.filter_alpha = " << filter_alpha << "\nnumerics.eta0 = " << eta0
       << "\nnumerics.c0 = " << c0 << "\nnumerics.eps = " << eps_override
       << "\nnumerics.outer_bc = " << outer_bc
       << "\nnumerics.velocity_form = " << velocity_form << "\noutput.dir = " << output_dir
       << "\noutput.cadence = " << diag_cadence
       << "\noutput.snapshots = " << (snapshots ? 1 : 0)
       << "\noutput.snapshot_cadence = " << snapshot_cadence << "\n";
    return os.str();
}

std::string RunConfig::hash() const {
    std::string s = serialize();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> eval_gamma0(const RunConfig& cfg, const ReferenceCurve& curve) {
    std::vector<double> g(curve.ns(), 0.0);
    const auto& c = cfg.gamma0_coeffs;
    if (c.empty()) return g;
    for (size_t j = 0; j < curve.ns(); ++j) {
        double s = curve.s_node(j);
        double acc = c[0];
        for (size_t k = 1; 2 * k - 1 < c.size(); ++k) {
            double arg = 2.0 * kPi * static_cast<double>(k) * s / curve.length;
            acc += c[2 * k - 1] * std::cos(arg);
            if (2 * k < c.size()) acc += c[2 * k] * std::sin(arg);
        }
        g[j] = acc;
    }
    return g;
}

ObstacleSpec make_obstacle(const RunConfig& cfg) {
    if (cfg.obstacle_profile == "paraboloid")
        return ObstacleSpec::paraboloid(cfg.obstacle_amplitude, cfg.R0, cfg.H0);
    if (cfg.obstacle_profile == "gaussian")
        return ObstacleSpec::gaussian(cfg.obstacle_amplitude, cfg.R0, cfg.obstacle_sigma, cfg.H0);
    throw SimError(ErrorCode::ConfigInvalid, "unknown obstacle profile: " + cfg.obstacle_profile);
}

} // namespace

RunSetup build_setup(const RunConfig& cfg) {
    if (cfg.R0 <= 0.0 || cfg.R_ext <= cfg.R0)
        throw SimError(ErrorCode::ConfigInvalid, "need 0 < R0 < R_ext");
    Discretization disc;
    disc.curve = make_circle_curve(cfg.R0, cfg.Ns);
    disc.curve.tube_halfwidth = cfg.r0;

    double rho_pole = cfg.R0 / static_cast<double>(cfg.Nr_int + 1);
    RadialGrid rint =
        RadialGrid::stretched_to_hi(-(cfg.R0 - rho_pole), 0.0, cfg.Nr_int, cfg.int_stretch);
    RadialGrid rext = RadialGrid::uniform(0.0, cfg.R_ext - cfg.R0, cfg.Nr_ext);
    int wid_ext = cfg.radial_order == 4 ? 5 : 3;
    int wid_int = cfg.int_radial_order == 4 ? 5 : 3;
    disc.grid_int = std::make_shared<NTGrid>(disc.curve, rint, wid_int);
    disc.grid_ext = std::make_shared<NTGrid>(disc.curve, rext, wid_ext);

    disc.physics.g = cfg.g;
    disc.physics.H0 = cfg.H0;
    disc.physics.rho = cfg.rho;
    disc.physics.p_atm = cfg.p_atm;
    disc.physics.c0 = cfg.c0;

    disc.exterior.cfl = cfg.cfl;
    disc.exterior.filter_cutoff = cfg.filter_cutoff;
    disc.exterior.filter_alpha = cfg.filter_alpha;
    disc.exterior.outer = cfg.outer_bc == "radiation" ? OuterBC::NonReflecting : OuterBC::Wall;
    disc.exterior.velocity_form =
        cfg.velocity_form == "advective" ? VelocityForm::Advective : VelocityForm::Gradient;

    disc.hanzawa.eta0 = cfg.eta0;
    disc.obstacle = make_obstacle(cfg);
    disc.obstacle.c0 = cfg.c0;

    SystemState st;
    st.line.gamma = eval_gamma0(cfg, disc.curve);
    st.line.dgamma_dt.assign(cfg.Ns, 0.0);
    st.psi.assign(cfg.Ns, 0.0);

    if (cfg.eps_override > 0.0)
        disc.hanzawa.eps = cfg.eps_override;
    else
        disc.hanzawa.eps = calibrate_epsilon(*disc.grid_int, st.line, disc.hanzawa);

    DiffeoField d_ext = build_diffeo(*disc.grid_ext, st.line, disc.hanzawa);
    st.ext = ExteriorState(disc.grid_ext->nr(), cfg.Ns);
    Expr::Vars vars;
    for (size_t i = 0; i < disc.grid_ext->nr(); ++i)
        for (size_t j = 0; j < cfg.Ns; ++j) {
            Vec2 x = d_ext.position.at(i, j);
            vars.x1 = x.x;
            vars.x2 = x.y;
            vars.r = disc.grid_ext->r_node(i);
            vars.s = disc.grid_ext->s_node(j);
            st.ext.zeta(i, j) = cfg.zeta0.valid() ? cfg.zeta0.eval(vars) : 0.0;
            st.ext.v.x(i, j) = cfg.v0_x.valid() ? cfg.v0_x.eval(vars) : 0.0;
            st.ext.v.y(i, j) = cfg.v0_y.valid() ? cfg.v0_y.eval(vars) : 0.0;
        }
    if (cfg.psi0.valid()) {
        for (size_t j = 0; j < cfg.Ns; ++j) {
            Vec2 x = d_ext.position.at(0, j);
            vars.x1 = x.x;
            vars.x2 = x.y;
            vars.r = 0.0;
            vars.s = disc.grid_ext->s_node(j);
            st.psi[j] = cfg.psi0.eval(vars);
        }
    }

    // The contact line is where the water surface meets the body, so the
    // initial elevation must equal Z_w at the (possibly displaced) ring;
    // blend the required trace into zeta0 across the tube.  The correction
    // vanishes identically for data that already match (chi(0) = 1 exactly).
    for (size_t j = 0; j < cfg.Ns; ++j) {
        double target = disc.obstacle.zw_radial(cfg.R0 + d_ext.R(0, j));
        double gap = target - st.ext.zeta(0, j);
        if (gap == 0.0) continue;
        for (size_t i = 0; i < disc.grid_ext->nr(); ++i) {
            double cut = disc.hanzawa.chi(disc.grid_ext->r_node(i) / cfg.r0);
            if (cut != 0.0) st.ext.zeta(i, j) += gap * cut;
        }
    }

    RunSetup setup{std::move(disc), std::move(st)};
    return setup;
}

std::vector<ConfigViolation> validate_config(const RunConfig& cfg) {
    std::vector<ConfigViolation> out;
    auto note = [&](const std::string& what, const std::string& where = "") {
        out.push_back({what, where});
    };

    if (cfg.R0 <= 0.0) {
        note("R0 must be positive");
        return out;
    }
    if (cfg.R_ext <= cfg.R0) note("R_ext must exceed R0");
    if (cfg.Ns < 8 || cfg.Ns % 2 != 0) note("Ns must be even and >= 8");
    // tube geometry: r0 * max|kappa| < 1 (circle: kappa = 1/R0)
    if (cfg.r0 / cfg.R0 >= 1.0) note("tube too wide: r0 * max|kappa| >= 1");
    if (cfg.r0 >= cfg.R_ext - cfg.R0)
        note("tube exceeds the exterior radial extent (phi must be identity at the wall)");

    RunSetup setup;
    try {
        setup = build_setup(cfg);
    } catch (const SimError& e) {
        note(std::string("setup failed: ") + e.what());
        return out;
    }
    const Discretization& disc = setup.disc;
    const SystemState& st = setup.state;

    // obstacle floor H_w >= c0 on the interior region
    double min_hw = disc.obstacle.min_hw(cfg.R0);
    if (min_hw < cfg.c0)
        note("H_w floor violated: min H_w = " + std::to_string(min_hw), "interior chart");

    // gamma0 inside the tube
    double gm = st.line.max_abs();
    if (gm > cfg.eta0 * cfg.r0)
        note("initial contact line outside the tube bound eta0*r0: max|gamma0| = " +
             std::to_string(gm));

    // waterline transversality: |Z_w'(R0)| should clear 2*c0 when water is flat
    try {
        DiffeoField d_ext = build_diffeo(*disc.grid_ext, st.line, disc.hanzawa);
        DiffeoField d_int = build_diffeo(*disc.grid_int, st.line, disc.hanzawa);
        EllipticOperator op(*disc.grid_int, d_int, disc.obstacle);
        InteriorState ist = solve_interior(op, d_int, disc.obstacle, st.psi);
        CouplingTrace tr = extract_trace(st.ext, d_ext, ist, d_int, disc.physics);
        double tm = transversality(tr);
        if (tm < 2.0 * cfg.c0) {
            size_t jworst = 0;
            double worst = 1e300;
            for (size_t j = 0; j < tr.ns(); ++j) {
                double m = std::abs(tr.dn_zeta[j] - tr.dn_zeta_i[j]);
                if (m < worst) {
                    worst = m;
                    jworst = j;
                }
            }
            note("initial transversality margin " + std::to_string(tm) + " below 2*c0",
                 "s-node " + std::to_string(jworst));
        }

        // initial subcriticality with w = v - d_t phi(0)
        std::vector<double> dg = gamma_rhs(tr, cfg.c0);
        d_ext.set_time_derivative(dg);
        StateMargins m = state_margins(st.ext, d_ext, disc.physics);
        if (m.min_h <= 0.0) note("initial depth nonpositive");
        if (m.min_subcrit < 2.0 * cfg.c0) {
            size_t iw = 0, jw = 0;
            double worst = 1e300;
            for (size_t i = 0; i < st.ext.nr(); ++i)
                for (size_t j = 0; j < st.ext.ns(); ++j) {
                    double h = disc.physics.H0 + st.ext.zeta(i, j);
                    Vec2 w = st.ext.v.at(i, j) - d_ext.dphi_dt.at(i, j);
                    double sm = disc.physics.g * h - w.norm2();
                    if (sm < worst) {
                        worst = sm;
                        iw = i;
                        jw = j;
                    }
                }
            note("initial subcriticality margin " + std::to_string(m.min_subcrit) +
                     " below 2*c0",
                 "node (" + std::to_string(iw) + "," + std::to_string(jw) + ")");
        }
    } catch (const SimError& e) {
        note(std::string("initial-state check failed: ") + e.what());
    }
    return out;
}

} // namespace foswe
