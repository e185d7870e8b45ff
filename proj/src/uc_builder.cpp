#include "decarb/uc_builder.hpp"

#include <algorithm>
#include <cmath>

#include "decarb/errors.hpp"

namespace decarb {

namespace {

double value_or_zero(const std::map<int, double>& m, int year) {
    auto it = m.find(year);
    return it == m.end() ? 0.0 : it->second;
}

constexpr const char* kProductCode[] = {"fr", "ru", "rd", "sp", "lu", "ld"};


struct BlockCtx {
    MixedIntegerModel& m;
    UcBlock& blk;
    const SystemFleet& fleet;
    const TimeGrid& grid;
    int T;
    std::string tag; // "_<year>_<week>"

    std::string name(const std::string& prefix, const std::string& id, int t) const {
        return prefix + "_" + id + tag + "_t" + std::to_string(t);
    }
    std::string rowname(const std::string& family, const std::string& id, int t) const {
        return family + "_" + id + tag + "_t" + std::to_string(t);
    }
    int tau(int t) const { return canonical_hour(t, T); }
    void note_row(const std::string& family, int row) { blk.rows[family].push_back(row); }
};

void build_thermal(BlockCtx& cx, const ThermalUnit& u, const LinearExpr& on_expr) {
    const int T = cx.T;
    if (u.min_uptime > T || u.min_downtime > T) {
        throw BuildError("unit " + u.id + ": min uptime/downtime exceeds the " +
                         std::to_string(T) + "-hour circular window");
    }
    const bool on_const = on_expr.is_constant();
    const double on_c = on_expr.constant;

    auto& commit = cx.blk.thermal_commit[u.id];
    auto& power = cx.blk.thermal_power[u.id];
    auto& headroom = cx.blk.thermal_headroom[u.id];
    auto& start = cx.blk.thermal_start[u.id];
    auto& stop = cx.blk.thermal_stop[u.id];
    commit.assign(static_cast<size_t>(T), -1);
    start.assign(static_cast<size_t>(T), -1);
    stop.assign(static_cast<size_t>(T), -1);
    power.resize(static_cast<size_t>(T));
    headroom.resize(static_cast<size_t>(T));

    if (u.must_run) {
        for (int t = 0; t < T; ++t) {
            double plo = on_const ? u.p_min * on_c : 0.0;
            double phi = on_const ? u.p_max * on_c : u.p_max;
            power[static_cast<size_t>(t)] = cx.m.add_continuous(cx.name("p", u.id, t), plo, phi);
            headroom[static_cast<size_t>(t)] =
                cx.m.add_continuous(cx.name("hr", u.id, t), 0.0, phi);
        }
        for (int t = 0; t < T; ++t) {
            LinearExpr cap;
            cap.add(power[static_cast<size_t>(t)], 1.0).add(headroom[static_cast<size_t>(t)], -1.0);
            cx.note_row("thermal_max",
                        cx.m.add_row(cx.rowname("tmax", u.id, t), cap, RowSense::LessEqual, 0.0));
            if (!on_const) {
                LinearExpr lo;
                lo.add(power[static_cast<size_t>(t)], 1.0).add(on_expr, -u.p_min);
                cx.note_row("thermal_min", cx.m.add_row(cx.rowname("tmin", u.id, t), lo,
                                                        RowSense::GreaterEqual, 0.0));
                LinearExpr hi;
                hi.add(headroom[static_cast<size_t>(t)], 1.0).add(on_expr, -u.p_max);
                cx.note_row("thermal_headroom", cx.m.add_row(cx.rowname("thr", u.id, t), hi,
                                                             RowSense::LessEqual, 0.0));
            }
        }
        // Committed output never changes status inside the week, so only the
        // plain ramp band can bind; it is redundant once it covers the full
        // operating range.
        if (u.ramp_up < u.p_max) {
            for (int t = 0; t < T; ++t) {
                LinearExpr e;
                e.add(power[static_cast<size_t>(t)], 1.0)
                    .add(power[static_cast<size_t>(cx.tau(t - 1))], -1.0)
                    .add(on_expr, -u.ramp_up);
                cx.note_row("ramp_up", cx.m.add_row(cx.rowname("rup", u.id, t), e,
                                                    RowSense::LessEqual, 0.0));
            }
        }
        if (u.ramp_down < u.p_max) {
            for (int t = 0; t < T; ++t) {
                LinearExpr e;
                e.add(power[static_cast<size_t>(cx.tau(t - 1))], 1.0)
                    .add(power[static_cast<size_t>(t)], -1.0)
                    .add(on_expr, -u.ramp_down);
                cx.note_row("ramp_down", cx.m.add_row(cx.rowname("rdn", u.id, t), e,
                                                      RowSense::LessEqual, 0.0));
            }
        }
        return;
    }

    // Committable unit: hourly binary with start/stop indicator linking.
    const double commit_ub = on_const ? std::min(1.0, on_c) : 1.0;
    for (int t = 0; t < T; ++t) {
        commit[static_cast<size_t>(t)] =
            cx.m.add_variable(cx.name("on", u.id, t), VarKind::Binary, 0.0, commit_ub);
        power[static_cast<size_t>(t)] =
            cx.m.add_continuous(cx.name("p", u.id, t), 0.0, u.p_max * commit_ub);
        headroom[static_cast<size_t>(t)] =
            cx.m.add_continuous(cx.name("hr", u.id, t), 0.0, u.p_max * commit_ub);
        start[static_cast<size_t>(t)] =
            cx.m.add_continuous(cx.name("su", u.id, t), 0.0, 1.0);
        stop[static_cast<size_t>(t)] =
            cx.m.add_continuous(cx.name("sd", u.id, t), 0.0, 1.0);
    }
    auto v = [&](int t) { return commit[static_cast<size_t>(cx.tau(t))]; };
    auto p = [&](int t) { return power[static_cast<size_t>(cx.tau(t))]; };

    for (int t = 0; t < T; ++t) {
        LinearExpr lo;
        lo.add(p(t), 1.0).add(v(t), -u.p_min);
        cx.note_row("thermal_min",
                    cx.m.add_row(cx.rowname("tmin", u.id, t), lo, RowSense::GreaterEqual, 0.0));
        LinearExpr cap;
        cap.add(p(t), 1.0).add(headroom[static_cast<size_t>(t)], -1.0);
        cx.note_row("thermal_max",
                    cx.m.add_row(cx.rowname("tmax", u.id, t), cap, RowSense::LessEqual, 0.0));
        LinearExpr hi;
        hi.add(headroom[static_cast<size_t>(t)], 1.0).add(v(t), -u.p_max);
        cx.note_row("thermal_headroom",
                    cx.m.add_row(cx.rowname("thr", u.id, t), hi, RowSense::LessEqual, 0.0));

        if (u.min_uptime >= 2) {
            LinearExpr e;
            for (int j = 0; j < u.min_uptime; ++j) e.add(v(t + j), 1.0);
            e.add(v(t), -static_cast<double>(u.min_uptime));
            e.add(v(t - 1), static_cast<double>(u.min_uptime));
            cx.note_row("uptime", cx.m.add_row(cx.rowname("upt", u.id, t), e,
                                               RowSense::GreaterEqual, 0.0));
        }
        if (u.min_downtime >= 2) {
            LinearExpr e;
            for (int j = 0; j < u.min_downtime; ++j) e.add(v(t + j), 1.0);
            e.add(v(t - 1), static_cast<double>(u.min_downtime));
            e.add(v(t), -static_cast<double>(u.min_downtime));
            cx.note_row("downtime",
                        cx.m.add_row(cx.rowname("dnt", u.id, t), e, RowSense::LessEqual,
                                     static_cast<double>(u.min_downtime)));
        }

        LinearExpr rup;
        rup.add(p(t), 1.0).add(p(t - 1), -1.0);
        rup.add(v(t - 1), u.startup_limit - u.ramp_up);
        rup.add(v(t), u.p_max - u.startup_limit);
        cx.note_row("ramp_up", cx.m.add_row(cx.rowname("rup", u.id, t), rup,
                                            RowSense::LessEqual, u.p_max));

        LinearExpr sdr;
        sdr.add(p(t), 1.0).add(v(t), -u.shutdown_limit);
        sdr.add(v(t + 1), u.shutdown_limit - u.p_max);
        cx.note_row("shutdown_ramp", cx.m.add_row(cx.rowname("sdr", u.id, t), sdr,
                                                  RowSense::LessEqual, 0.0));

        LinearExpr rdn;
        rdn.add(p(t), 1.0).add(p(t - 1), -1.0);
        rdn.add(v(t), u.ramp_down - u.shutdown_limit);
        rdn.add(v(t - 1), u.shutdown_limit - u.p_max);
        cx.note_row("ramp_down", cx.m.add_row(cx.rowname("rdn", u.id, t), rdn,
                                              RowSense::GreaterEqual, -u.p_max));

        LinearExpr sl;
        sl.add(start[static_cast<size_t>(t)], 1.0).add(v(t), -1.0).add(v(t - 1), 1.0);
        cx.note_row("start_link", cx.m.add_row(cx.rowname("stl", u.id, t), sl,
                                               RowSense::GreaterEqual, 0.0));
        LinearExpr dl;
        dl.add(stop[static_cast<size_t>(t)], 1.0).add(v(t), 1.0).add(v(t - 1), -1.0);
        cx.note_row("stop_link", cx.m.add_row(cx.rowname("spl", u.id, t), dl,
                                              RowSense::GreaterEqual, 0.0));

        if (!on_const) {
            LinearExpr g;
            g.add(v(t), 1.0).add(on_expr, -1.0);
            cx.note_row("commit_gate", cx.m.add_row(cx.rowname("gate", u.id, t), g,
                                                    RowSense::LessEqual, 0.0));
        }
    }
}

void build_renewable(BlockCtx& cx, const RenewableResource& r, const LinearExpr& cap_expr,
                     int year, const WeekSample& week) {
    const int T = cx.T;
    auto& power = cx.blk.renewable_power[r.id];
    power.resize(static_cast<size_t>(T));
    std::vector<int>* curt = nullptr;
    if (!r.is_firm) {
        curt = &cx.blk.renewable_curtail[r.id];
        curt->resize(static_cast<size_t>(T));
    }
    const bool cap_const = cap_expr.is_constant();

    for (int t = 0; t < T; ++t) {
        double pf = r.production_factor.at(year, week.week_id, t,
                                           "production factor of " + r.id);
        if (r.is_firm && cap_const) {
            double fixed = pf * cap_expr.constant;
            power[static_cast<size_t>(t)] =
                cx.m.add_continuous(cx.name("pr", r.id, t), fixed, fixed);
            continue;
        }
        power[static_cast<size_t>(t)] =
            cx.m.add_continuous(cx.name("pr", r.id, t), 0.0, kInfinity);
        LinearExpr e;
        e.add(power[static_cast<size_t>(t)], 1.0);
        if (!r.is_firm) {
            (*curt)[static_cast<size_t>(t)] =
                cx.m.add_continuous(cx.name("cu", r.id, t), 0.0, kInfinity);
            e.add((*curt)[static_cast<size_t>(t)], 1.0);
        }
        e.add(cap_expr, -pf);
        cx.note_row("renewable_balance",
                    cx.m.add_row(cx.rowname("ren", r.id, t), e, RowSense::Equal, 0.0));
    }
}

void build_hydro(BlockCtx& cx, const HydroResource& h, int year, const WeekSample& week) {
    const int T = cx.T;
    auto it = h.weekly_energy_budget.find({year, week.week_id});
    if (it == h.weekly_energy_budget.end()) {
        throw DataGapError("missing weekly energy budget for " + h.id + " at year " +
                           std::to_string(year) + ", week " + week.week_id);
    }
    auto& power = cx.blk.hydro_power[h.id];
    power.resize(static_cast<size_t>(T));
    for (int t = 0; t < T; ++t) {
        power[static_cast<size_t>(t)] =
            cx.m.add_continuous(cx.name("ph", h.id, t), h.p_min, h.p_max);
    }
    LinearExpr budget;
    for (int t = 0; t < T; ++t) budget.add(power[static_cast<size_t>(t)], 1.0);
    cx.note_row("hydro_budget", cx.m.add_row(cx.rowname("hbu", h.id, 0), budget,
                                             RowSense::LessEqual, it->second));
    if (h.ramp_limit < h.p_max - h.p_min) {
        for (int t = 0; t < T; ++t) {
            int nxt = cx.tau(t + 1);
            LinearExpr up;
            up.add(power[static_cast<size_t>(nxt)], 1.0).add(power[static_cast<size_t>(t)], -1.0);
            cx.note_row("hydro_ramp_up", cx.m.add_row(cx.rowname("hru", h.id, t), up,
                                                      RowSense::LessEqual, h.ramp_limit));
            LinearExpr dn;
            dn.add(power[static_cast<size_t>(t)], 1.0).add(power[static_cast<size_t>(nxt)], -1.0);
            cx.note_row("hydro_ramp_down", cx.m.add_row(cx.rowname("hrd", h.id, t), dn,
                                                        RowSense::LessEqual, h.ramp_limit));
        }
    }
}

void build_storage(BlockCtx& cx, const StorageResource& s, const LinearExpr& power_cap,
                   const LinearExpr& energy_cap) {
    const int T = cx.T;
    // Static cap for the exclusivity big-M: the largest power the resource
    // can ever reach under planned capacity plus the build allowance.
    double max_power = s.buildable_power_limit;
    for (const auto& [y, mw] : s.planned_power_by_year) max_power = std::max(max_power, mw + s.buildable_power_limit);
    const double big_charge = s.max_charge_rate * max_power;
    const double big_discharge = s.max_discharge_rate * max_power;

    const bool pcap_const = power_cap.is_constant();
    const bool ecap_const = energy_cap.is_constant();
    double charge_ub = pcap_const ? s.max_charge_rate * power_cap.constant : big_charge;
    double discharge_ub = pcap_const ? s.max_discharge_rate * power_cap.constant : big_discharge;

    auto& charge = cx.blk.storage_charge[s.id];
    auto& discharge = cx.blk.storage_discharge[s.id];
    auto& soc = cx.blk.storage_soc[s.id];
    auto& mode = cx.blk.storage_mode[s.id];
    charge.resize(static_cast<size_t>(T));
    discharge.resize(static_cast<size_t>(T));
    soc.resize(static_cast<size_t>(T));
    mode.assign(static_cast<size_t>(T), -1);

    double soc_lb = ecap_const ? s.soc_min_fraction * energy_cap.constant : 0.0;
    double soc_ub = ecap_const ? s.soc_max_fraction * energy_cap.constant : kInfinity;
    for (int t = 0; t < T; ++t) {
        charge[static_cast<size_t>(t)] =
            cx.m.add_continuous(cx.name("sc", s.id, t), 0.0, charge_ub);
        discharge[static_cast<size_t>(t)] =
            cx.m.add_continuous(cx.name("sg", s.id, t), 0.0, discharge_ub);
        soc[static_cast<size_t>(t)] =
            cx.m.add_continuous(cx.name("se", s.id, t), soc_lb, soc_ub);
        if (s.mode_binary) {
            mode[static_cast<size_t>(t)] = cx.m.add_binary(cx.name("sm", s.id, t));
        }
    }

    for (int t = 0; t < T; ++t) {
        if (s.mode_binary) {
            LinearExpr mc;
            mc.add(charge[static_cast<size_t>(t)], 1.0)
                .add(mode[static_cast<size_t>(t)], big_charge);
            cx.note_row("storage_mode_charge",
                        cx.m.add_row(cx.rowname("smc", s.id, t), mc, RowSense::LessEqual,
                                     big_charge));
            LinearExpr md;
            md.add(discharge[static_cast<size_t>(t)], 1.0)
                .add(mode[static_cast<size_t>(t)], -big_discharge);
            cx.note_row("storage_mode_discharge",
                        cx.m.add_row(cx.rowname("smd", s.id, t), md, RowSense::LessEqual, 0.0));
            if (!pcap_const) {
                LinearExpr cc;
                cc.add(charge[static_cast<size_t>(t)], 1.0).add(power_cap, -s.max_charge_rate);
                cx.note_row("storage_charge_cap",
                            cx.m.add_row(cx.rowname("scc", s.id, t), cc, RowSense::LessEqual, 0.0));
                LinearExpr dc;
                dc.add(discharge[static_cast<size_t>(t)], 1.0).add(power_cap, -s.max_discharge_rate);
                cx.note_row("storage_discharge_cap",
                            cx.m.add_row(cx.rowname("sdc", s.id, t), dc, RowSense::LessEqual, 0.0));
            }
        } else {
            // Exact continuous projection of the exclusivity disjunction:
            // charge/rate_c + discharge/rate_d <= installed power. Implies
            // both single-direction caps.
            LinearExpr ex;
            ex.add(charge[static_cast<size_t>(t)], 1.0 / s.max_charge_rate)
                .add(discharge[static_cast<size_t>(t)], 1.0 / s.max_discharge_rate)
                .add(power_cap, -1.0);
            cx.note_row("storage_mode_relaxed",
                        cx.m.add_row(cx.rowname("smx", s.id, t), ex, RowSense::LessEqual, 0.0));
        }

        LinearExpr bal;
        bal.add(soc[static_cast<size_t>(t)], 1.0)
            .add(soc[static_cast<size_t>(cx.tau(t - 1))], -(1.0 - s.self_discharge))
            .add(charge[static_cast<size_t>(t)], -s.charge_efficiency)
            .add(discharge[static_cast<size_t>(t)], 1.0 / s.discharge_efficiency);
        cx.note_row("soc_balance",
                    cx.m.add_row(cx.rowname("soc", s.id, t), bal, RowSense::Equal, 0.0));

        if (!ecap_const) {
            LinearExpr mx;
            mx.add(soc[static_cast<size_t>(t)], 1.0).add(energy_cap, -s.soc_max_fraction);
            cx.note_row("soc_max",
                        cx.m.add_row(cx.rowname("sex", s.id, t), mx, RowSense::LessEqual, 0.0));
            if (s.soc_min_fraction > 0.0) {
                LinearExpr mn;
                mn.add(soc[static_cast<size_t>(t)], 1.0).add(energy_cap, -s.soc_min_fraction);
                cx.note_row("soc_min", cx.m.add_row(cx.rowname("sen", s.id, t), mn,
                                                    RowSense::GreaterEqual, 0.0));
            }
        }
    }
}

void build_reserves(BlockCtx& cx, int year, const WeekSample& week,
                    const ResourceYearLinks& links) {
    const Zone* policy = cx.fleet.policy_zone();
    if (policy == nullptr) return;
    const ReserveSpec& rs = policy->reserves;
    const int T = cx.T;

    auto load_at = [&](int t) {
        return policy->load.at(year, week.week_id, t, "load of " + policy->id);
    };
    auto lf_req = [&](const HourlySeries& s, int t) {
        return s.empty() ? 0.0
                         : s.at(year, week.week_id, t,
                                "load-following requirement of " + policy->id);
    };

    // Per-hour requirement per product; a product is built only when its
    // requirement is positive somewhere in the block.
    std::map<ReserveProduct, std::vector<double>> req;
    auto fill = [&](ReserveProduct p, auto&& f) {
        std::vector<double> v(static_cast<size_t>(T));
        double mx = 0.0;
        for (int t = 0; t < T; ++t) {
            v[static_cast<size_t>(t)] = f(t);
            mx = std::max(mx, v[static_cast<size_t>(t)]);
        }
        if (mx > 0.0) req.emplace(p, std::move(v));
    };
    fill(ReserveProduct::FreqResponse, [&](int) { return rs.freq_response_mw; });
    fill(ReserveProduct::RegUp,
         [&](int t) { return rs.regulation_up_fraction_of_load * load_at(t); });
    fill(ReserveProduct::RegDown,
         [&](int t) { return rs.regulation_down_fraction_of_load * load_at(t); });
    fill(ReserveProduct::Spin, [&](int t) { return rs.spin_fraction_of_load * load_at(t); });
    fill(ReserveProduct::LoadFollowUp, [&](int t) { return lf_req(rs.load_following_up, t); });
    fill(ReserveProduct::LoadFollowDown,
         [&](int t) { return lf_req(rs.load_following_down, t); });
    if (req.empty()) return;

    auto has = [&](ReserveProduct p) { return req.count(p) > 0; };
    auto rvar = [&](const std::string& id, ReserveProduct p, int t) {
        return cx.blk.reserve.at({id, static_cast<int>(p)})[static_cast<size_t>(t)];
    };
    auto declare = [&](const std::string& id, ReserveProduct p, double ub) {
        auto& v = cx.blk.reserve[{id, static_cast<int>(p)}];
        v.resize(static_cast<size_t>(T));
        for (int t = 0; t < T; ++t) {
            v[static_cast<size_t>(t)] = cx.m.add_continuous(
                cx.name(std::string("rs") + kProductCode[static_cast<int>(p)], id, t), 0.0, ub);
        }
    };

    // Declare provision variables for policy-zone providers.
    for (const auto& u : cx.fleet.thermal) {
        if (u.zone_id != policy->id) continue;
        for (auto p : {ReserveProduct::FreqResponse, ReserveProduct::RegUp,
                       ReserveProduct::RegDown, ReserveProduct::Spin,
                       ReserveProduct::LoadFollowUp, ReserveProduct::LoadFollowDown}) {
            if (!has(p)) continue;
            double ub = p == ReserveProduct::FreqResponse
                            ? u.freq_response_fraction * u.p_max
                            : u.ten_minute_ramp;
            if (ub <= 0.0) continue;
            declare(u.id, p, ub);
        }
    }
    for (const auto& h : cx.fleet.hydro) {
        if (h.zone_id != policy->id) continue;
        for (auto p : {ReserveProduct::FreqResponse, ReserveProduct::RegUp,
                       ReserveProduct::RegDown, ReserveProduct::Spin,
                       ReserveProduct::LoadFollowUp, ReserveProduct::LoadFollowDown}) {
            if (has(p)) declare(h.id, p, h.p_max);
        }
    }
    for (const auto& s : cx.fleet.storage) {
        if (s.zone_id != policy->id) continue;
        for (auto p : {ReserveProduct::FreqResponse, ReserveProduct::RegUp,
                       ReserveProduct::RegDown, ReserveProduct::Spin,
                       ReserveProduct::LoadFollowUp, ReserveProduct::LoadFollowDown}) {
            if (has(p)) declare(s.id, p, kInfinity);
        }
    }
    for (const auto& r : cx.fleet.renewables) {
        if (r.zone_id != policy->id || r.is_firm) continue;
        if (has(ReserveProduct::LoadFollowUp)) declare(r.id, ReserveProduct::LoadFollowUp, kInfinity);
        if (has(ReserveProduct::LoadFollowDown)) declare(r.id, ReserveProduct::LoadFollowDown, kInfinity);
    }

    bool any_up = has(ReserveProduct::FreqResponse) || has(ReserveProduct::RegUp) ||
                  has(ReserveProduct::Spin) || has(ReserveProduct::LoadFollowUp);
    bool any_down = has(ReserveProduct::RegDown) || has(ReserveProduct::LoadFollowDown);
    auto up_products = {ReserveProduct::FreqResponse, ReserveProduct::RegUp,
                        ReserveProduct::Spin, ReserveProduct::LoadFollowUp};
    auto down_products = {ReserveProduct::RegDown, ReserveProduct::LoadFollowDown};
    auto provides = [&](const std::string& id, ReserveProduct p) {
        return cx.blk.reserve.count({id, static_cast<int>(p)}) > 0;
    };

    // Provider capability rows.
    for (const auto& u : cx.fleet.thermal) {
        if (u.zone_id != policy->id) continue;
        const auto& power = cx.blk.thermal_power.at(u.id);
        const auto& headroom = cx.blk.thermal_headroom.at(u.id);
        const auto& commit = cx.blk.thermal_commit.at(u.id);
        const LinearExpr& on_expr = links.thermal_on.count(u.id)
                                        ? links.thermal_on.at(u.id)
                                        : LinearExpr(1.0);
        for (int t = 0; t < T; ++t) {
            if (provides(u.id, ReserveProduct::FreqResponse)) {
                LinearExpr e;
                e.add(rvar(u.id, ReserveProduct::FreqResponse, t), 1.0)
                    .add(power[static_cast<size_t>(t)], -u.freq_response_fraction);
                cx.note_row("fr_thermal_cap", cx.m.add_row(cx.rowname("frc", u.id, t), e,
                                                           RowSense::LessEqual, 0.0));
            }
            if (any_up) {
                LinearExpr pool;
                bool nonempty = false;
                for (auto p : up_products) {
                    if (provides(u.id, p)) {
                        pool.add(rvar(u.id, p, t), 1.0);
                        nonempty = true;
                    }
                }
                if (nonempty) {
                    pool.add(power[static_cast<size_t>(t)], 1.0)
                        .add(headroom[static_cast<size_t>(t)], -1.0);
                    cx.note_row("thermal_up_pool", cx.m.add_row(cx.rowname("tup", u.id, t), pool,
                                                                RowSense::LessEqual, 0.0));
                }
            }
            if (any_down) {
                LinearExpr pool;
                bool nonempty = false;
                for (auto p : down_products) {
                    if (provides(u.id, p)) {
                        pool.add(rvar(u.id, p, t), 1.0);
                        nonempty = true;
                    }
                }
                if (nonempty) {
                    pool.add(power[static_cast<size_t>(t)], -1.0);
                    if (commit[static_cast<size_t>(t)] >= 0) {
                        pool.add(commit[static_cast<size_t>(t)], u.p_min);
                    } else {
                        pool.add(on_expr, u.p_min);
                    }
                    cx.note_row("thermal_down_pool",
                                cx.m.add_row(cx.rowname("tdp", u.id, t), pool,
                                             RowSense::LessEqual, 0.0));
                }
            }
        }
    }
    for (const auto& h : cx.fleet.hydro) {
        if (h.zone_id != policy->id) continue;
        const auto& power = cx.blk.hydro_power.at(h.id);
        for (int t = 0; t < T; ++t) {
            if (any_up) {
                LinearExpr pool;
                for (auto p : up_products) {
                    if (provides(h.id, p)) pool.add(rvar(h.id, p, t), 1.0);
                }
                if (!pool.terms.empty()) {
                    pool.add(power[static_cast<size_t>(t)], 1.0);
                    cx.note_row("hydro_up_pool", cx.m.add_row(cx.rowname("hup", h.id, t), pool,
                                                              RowSense::LessEqual, h.p_max));
                }
            }
            if (any_down) {
                LinearExpr pool;
                for (auto p : down_products) {
                    if (provides(h.id, p)) pool.add(rvar(h.id, p, t), 1.0);
                }
                if (!pool.terms.empty()) {
                    pool.add(power[static_cast<size_t>(t)], -1.0);
                    cx.note_row("hydro_down_pool",
                                cx.m.add_row(cx.rowname("hdp", h.id, t), pool,
                                             RowSense::LessEqual, -h.p_min));
                }
            }
        }
    }
    for (const auto& s : cx.fleet.storage) {
        if (s.zone_id != policy->id) continue;
        const auto& charge = cx.blk.storage_charge.at(s.id);
        const auto& discharge = cx.blk.storage_discharge.at(s.id);
        const LinearExpr& pc = links.storage_power.count(s.id) ? links.storage_power.at(s.id)
                                                               : LinearExpr(0.0);
        for (int t = 0; t < T; ++t) {
            if (any_up) {
                LinearExpr pool;
                for (auto p : up_products) {
                    if (provides(s.id, p)) pool.add(rvar(s.id, p, t), 1.0);
                }
                if (!pool.terms.empty()) {
                    pool.add(discharge[static_cast<size_t>(t)], 1.0)
                        .add(charge[static_cast<size_t>(t)], -1.0)
                        .add(pc, -s.max_discharge_rate);
                    cx.note_row("storage_up_pool",
                                cx.m.add_row(cx.rowname("sup", s.id, t), pool,
                                             RowSense::LessEqual, 0.0));
                }
            }
            if (any_down) {
                LinearExpr pool;
                for (auto p : down_products) {
                    if (provides(s.id, p)) pool.add(rvar(s.id, p, t), 1.0);
                }
                if (!pool.terms.empty()) {
                    pool.add(charge[static_cast<size_t>(t)], 1.0)
                        .add(discharge[static_cast<size_t>(t)], -1.0)
                        .add(pc, -s.max_charge_rate);
                    cx.note_row("storage_down_pool",
                                cx.m.add_row(cx.rowname("sdp", s.id, t), pool,
                                             RowSense::LessEqual, 0.0));
                }
            }
        }
    }
    for (const auto& r : cx.fleet.renewables) {
        if (r.zone_id != policy->id || r.is_firm) continue;
        for (int t = 0; t < T; ++t) {
            if (provides(r.id, ReserveProduct::LoadFollowUp)) {
                LinearExpr e;
                e.add(rvar(r.id, ReserveProduct::LoadFollowUp, t), 1.0)
                    .add(cx.blk.renewable_curtail.at(r.id)[static_cast<size_t>(t)], -1.0);
                cx.note_row("lf_renewable_up_cap",
                            cx.m.add_row(cx.rowname("rlu", r.id, t), e, RowSense::LessEqual, 0.0));
            }
            if (provides(r.id, ReserveProduct::LoadFollowDown)) {
                LinearExpr e;
                e.add(rvar(r.id, ReserveProduct::LoadFollowDown, t), 1.0)
                    .add(cx.blk.renewable_power.at(r.id)[static_cast<size_t>(t)], -1.0);
                cx.note_row("lf_renewable_down_cap",
                            cx.m.add_row(cx.rowname("rld", r.id, t), e, RowSense::LessEqual, 0.0));
            }
        }
    }

    // Requirement rows.
    auto sum_over = [&](ReserveProduct p, bool thermal, bool hydro, bool storage, int t) {
        LinearExpr e;
        if (thermal) {
            for (const auto& u : cx.fleet.thermal) {
                if (u.zone_id == policy->id && provides(u.id, p)) e.add(rvar(u.id, p, t), 1.0);
            }
        }
        if (hydro) {
            for (const auto& h : cx.fleet.hydro) {
                if (h.zone_id == policy->id && provides(h.id, p)) e.add(rvar(h.id, p, t), 1.0);
            }
        }
        if (storage) {
            for (const auto& s : cx.fleet.storage) {
                if (s.zone_id == policy->id && provides(s.id, p)) e.add(rvar(s.id, p, t), 1.0);
            }
        }
        return e;
    };

    for (int t = 0; t < T; ++t) {
        if (has(ReserveProduct::FreqResponse)) {
            double need = req.at(ReserveProduct::FreqResponse)[static_cast<size_t>(t)];
            if (need > 0.0) {
                LinearExpr all = sum_over(ReserveProduct::FreqResponse, true, true, true, t);
                cx.note_row("fr_requirement",
                            cx.m.add_row(cx.rowname("frq", policy->id, t), all,
                                         RowSense::GreaterEqual, need));
                if (rs.freq_response_min_battery_gas_fraction > 0.0) {
                    LinearExpr bg = sum_over(ReserveProduct::FreqResponse, true, false, true, t);
                    cx.note_row("fr_battery_gas",
                                cx.m.add_row(cx.rowname("fbg", policy->id, t), bg,
                                             RowSense::GreaterEqual,
                                             rs.freq_response_min_battery_gas_fraction * need));
                }
            }
        }
        auto simple = [&](ReserveProduct p, const char* fam, const char* rn) {
            if (!has(p)) return;
            double need = req.at(p)[static_cast<size_t>(t)];
            if (need <= 0.0) return;
            LinearExpr all = sum_over(p, true, true, true, t);
            cx.note_row(fam, cx.m.add_row(cx.rowname(rn, policy->id, t), all,
                                          RowSense::GreaterEqual, need));
        };
        simple(ReserveProduct::RegUp, "regup_requirement", "rqu");
        simple(ReserveProduct::RegDown, "regdn_requirement", "rqd");
        simple(ReserveProduct::Spin, "spin_requirement", "rqs");

        auto lf = [&](ReserveProduct p, const char* fam, const char* capfam, const char* rn,
                      const char* capn) {
            if (!has(p)) return;
            double need = req.at(p)[static_cast<size_t>(t)];
            if (need <= 0.0) return;
            LinearExpr all = sum_over(p, true, true, true, t);
            LinearExpr ren;
            for (const auto& r : cx.fleet.renewables) {
                if (r.zone_id == policy->id && provides(r.id, p)) {
                    int rv = rvar(r.id, p, t);
                    all.add(rv, 1.0);
                    ren.add(rv, 1.0);
                }
            }
            cx.note_row(fam, cx.m.add_row(cx.rowname(rn, policy->id, t), all,
                                          RowSense::GreaterEqual, need));
            if (!ren.terms.empty()) {
                // Wind/solar cover at most half of the load-following need.
                cx.note_row(capfam, cx.m.add_row(cx.rowname(capn, policy->id, t), ren,
                                                 RowSense::LessEqual, 0.5 * need));
            }
        };
        lf(ReserveProduct::LoadFollowUp, "lfu_requirement", "lfu_renewable_cap", "rql", "rcl");
        lf(ReserveProduct::LoadFollowDown, "lfd_requirement", "lfd_renewable_cap", "rqm", "rcm");
    }
}

} // namespace

ResourceYearLinks ResourceYearLinks::fixed(const SystemFleet& fleet, int year) {
    ResourceYearLinks links;
    for (const auto& u : fleet.thermal) {
        auto it = u.planned_status_by_year.find(year);
        links.thermal_on[u.id] =
            LinearExpr(it == u.planned_status_by_year.end() ? 0.0 : it->second);
    }
    for (const auto& r : fleet.renewables) {
        links.renewable_capacity[r.id] =
            LinearExpr(value_or_zero(r.planned_capacity_by_year, year));
    }
    for (const auto& s : fleet.storage) {
        links.storage_power[s.id] = LinearExpr(value_or_zero(s.planned_power_by_year, year));
        links.storage_energy[s.id] = LinearExpr(value_or_zero(s.planned_energy_by_year, year));
    }
    return links;
}

const std::vector<int>& UcBlock::vars(const std::map<std::string, std::vector<int>>& family,
                                      const std::string& id) const {
    auto it = family.find(id);
    if (it == family.end()) throw BuildError("no variables recorded for resource " + id);
    return it->second;
}

UcBlock build_uc_block(MixedIntegerModel& model, const SystemFleet& fleet,
                       const TimeGrid& grid, int year, const WeekSample& week,
                       const ResourceYearLinks& links, const UcBuildOptions& options) {
    if (grid.hours_per_week < 2) {
        throw BuildError("circular week needs at least 2 hours");
    }
    UcBlock blk;
    blk.year = year;
    blk.week_id = week.week_id;
    blk.week_weight = week.weight;
    blk.hours = grid.hours_per_week;

    BlockCtx cx{model, blk, fleet, grid, grid.hours_per_week,
                "_" + std::to_string(year) + "_" + week.week_id};

    for (const auto& u : fleet.thermal) {
        auto it = links.thermal_on.find(u.id);
        build_thermal(cx, u, it == links.thermal_on.end() ? LinearExpr(1.0) : it->second);
    }
    for (const auto& r : fleet.renewables) {
        auto it = links.renewable_capacity.find(r.id);
        build_renewable(cx, r, it == links.renewable_capacity.end() ? LinearExpr(0.0) : it->second,
                        year, week);
    }
    for (const auto& h : fleet.hydro) build_hydro(cx, h, year, week);
    for (const auto& s : fleet.storage) {
        LinearExpr pcap = links.storage_power.count(s.id) ? links.storage_power.at(s.id)
                                                          : LinearExpr(0.0);
        LinearExpr ecap = links.storage_energy.count(s.id) ? links.storage_energy.at(s.id)
                                                           : LinearExpr(0.0);
        build_storage(cx, s, pcap, ecap);
    }
    for (const auto& l : fleet.lines) {
        auto& pos = blk.line_flow_pos[l.id];
        auto& neg = blk.line_flow_neg[l.id];
        pos.resize(static_cast<size_t>(blk.hours));
        neg.resize(static_cast<size_t>(blk.hours));
        for (int t = 0; t < blk.hours; ++t) {
            pos[static_cast<size_t>(t)] =
                model.add_continuous(cx.name("fp", l.id, t), 0.0, l.flow_max);
            neg[static_cast<size_t>(t)] =
                model.add_continuous(cx.name("fn", l.id, t), 0.0, -l.flow_min);
        }
    }
    if (options.reserves) build_reserves(cx, year, week, links);

    // Zonal balance residuals: generation + net imports - load, unasserted.
    std::map<std::string, int> zone_index;
    blk.zone_order.reserve(fleet.zones.size());
    for (const auto& z : fleet.zones) {
        zone_index[z.id] = static_cast<int>(blk.zone_order.size());
        blk.zone_order.push_back(z.id);
        blk.residual.emplace_back(static_cast<size_t>(blk.hours));
    }
    auto zone_of = [&](const std::string& zid, const std::string& what) -> int {
        auto it = zone_index.find(zid);
        if (it == zone_index.end()) {
            throw BuildError(what + " references unknown zone " + zid);
        }
        return it->second;
    };
    for (const auto& u : fleet.thermal) {
        int z = zone_of(u.zone_id, "unit " + u.id);
        for (int t = 0; t < blk.hours; ++t) {
            blk.residual[static_cast<size_t>(z)][static_cast<size_t>(t)].add(
                blk.thermal_power.at(u.id)[static_cast<size_t>(t)], 1.0);
        }
    }
    for (const auto& r : fleet.renewables) {
        int z = zone_of(r.zone_id, "resource " + r.id);
        for (int t = 0; t < blk.hours; ++t) {
            blk.residual[static_cast<size_t>(z)][static_cast<size_t>(t)].add(
                blk.renewable_power.at(r.id)[static_cast<size_t>(t)], 1.0);
        }
    }
    for (const auto& h : fleet.hydro) {
        int z = zone_of(h.zone_id, "resource " + h.id);
        for (int t = 0; t < blk.hours; ++t) {
            blk.residual[static_cast<size_t>(z)][static_cast<size_t>(t)].add(
                blk.hydro_power.at(h.id)[static_cast<size_t>(t)], 1.0);
        }
    }
    for (const auto& s : fleet.storage) {
        int z = zone_of(s.zone_id, "resource " + s.id);
        for (int t = 0; t < blk.hours; ++t) {
            auto& res = blk.residual[static_cast<size_t>(z)][static_cast<size_t>(t)];
            res.add(blk.storage_discharge.at(s.id)[static_cast<size_t>(t)], 1.0);
            res.add(blk.storage_charge.at(s.id)[static_cast<size_t>(t)], -1.0);
        }
    }
    for (const auto& l : fleet.lines) {
        int zi = zone_of(l.to_zone, "line " + l.id);
        int zo = zone_of(l.from_zone, "line " + l.id);
        for (int t = 0; t < blk.hours; ++t) {
            int fp = blk.line_flow_pos.at(l.id)[static_cast<size_t>(t)];
            int fn = blk.line_flow_neg.at(l.id)[static_cast<size_t>(t)];
            blk.residual[static_cast<size_t>(zi)][static_cast<size_t>(t)].add(fp, 1.0).add(fn, -1.0);
            blk.residual[static_cast<size_t>(zo)][static_cast<size_t>(t)].add(fp, -1.0).add(fn, 1.0);
        }
    }
    for (const auto& z : fleet.zones) {
        int zi = zone_index.at(z.id);
        for (int t = 0; t < blk.hours; ++t) {
            blk.residual[static_cast<size_t>(zi)][static_cast<size_t>(t)].constant -=
                z.load.at(year, week.week_id, t, "load of " + z.id);
            blk.residual[static_cast<size_t>(zi)][static_cast<size_t>(t)].compress();
        }
    }

    // Week cost: startup/shutdown + commitment + fuel + wheeling + curtailment.
    LinearExpr cost;
    for (const auto& u : fleet.thermal) {
        const auto& power = blk.thermal_power.at(u.id);
        const auto& commit = blk.thermal_commit.at(u.id);
        for (int t = 0; t < blk.hours; ++t) {
            cost.add(power[static_cast<size_t>(t)], u.gen_cost_slope);
            if (commit[static_cast<size_t>(t)] >= 0) {
                cost.add(commit[static_cast<size_t>(t)], u.gen_cost_intercept);
                cost.add(blk.thermal_start.at(u.id)[static_cast<size_t>(t)], u.startup_cost);
                cost.add(blk.thermal_stop.at(u.id)[static_cast<size_t>(t)], u.shutdown_cost);
            } else {
                auto it = links.thermal_on.find(u.id);
                cost.add(it == links.thermal_on.end() ? LinearExpr(1.0) : it->second,
                         u.gen_cost_intercept);
            }
        }
    }
    for (const auto& l : fleet.lines) {
        for (int t = 0; t < blk.hours; ++t) {
            cost.add(blk.line_flow_pos.at(l.id)[static_cast<size_t>(t)], l.wheeling_cost);
            cost.add(blk.line_flow_neg.at(l.id)[static_cast<size_t>(t)], l.wheeling_cost);
        }
    }
    for (const auto& r : fleet.renewables) {
        if (r.is_firm) continue;
        for (int t = 0; t < blk.hours; ++t) {
            cost.add(blk.renewable_curtail.at(r.id)[static_cast<size_t>(t)], r.curtailment_cost);
        }
    }
    cost.compress();
    blk.cost = std::move(cost);
    return blk;
}

} // namespace decarb
