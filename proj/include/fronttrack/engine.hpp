// engine.hpp: event-driven front tracking with replaceable shock speeds.
// Between events every front moves on a straight line, so collision times
// are closed-form; at each collision the accurate solver is used when the
// product of the incoming physical strengths exceeds eps_nu, otherwise the
// simplified solver caps the front count with a non-physical closure.
// Event ordering is made reproducible by a deterministic per-front speed
// perturbation of id * 1e-12 (non-physical fronts stay exactly at
// lambda_hat and are never paired with each other).
#pragma once

#include <limits>
#include <queue>
#include <unordered_map>
#include <vector>

#include "fronttrack/fan_solvers.hpp"
#include "fronttrack/piecewise.hpp"
#include "fronttrack/shift_policy.hpp"
#include "fronttrack/weight.hpp"

namespace fronttrack {

struct EngineParams {
    double delta_nu = 0.02;   // max rarefaction piece strength
    double eps_nu = 1e-4;     // accurate/simplified threshold on strength products
    double kappa = 10.0;      // interaction-potential weight
    double weight_c = 1.0;    // weight-function constant C
    bool track_weights = false;
    ShiftPolicySpec policy{};
    double checkpoint_dt = 0.0;  // 0 = re-evaluate speeds at events only
    long max_events = 1000000;
    double tv_limit = 0.5;
    SolveOptions solve{};

    void validate() const {
        if (!(delta_nu > 0.0)) throw ConfigError("engine.delta_nu must be > 0");
        if (!(eps_nu >= 0.0)) throw ConfigError("engine.eps_nu must be >= 0");
        if (!(kappa > 0.0)) throw ConfigError("engine.kappa must be > 0");
        if (!(weight_c >= 0.0)) throw ConfigError("engine.weight_c must be >= 0");
        if (!(checkpoint_dt >= 0.0)) throw ConfigError("engine.checkpoint_dt must be >= 0");
        if (!(max_events > 0)) throw ConfigError("engine.max_events must be > 0");
        if (!(tv_limit > 0.0)) throw ConfigError("engine.tv_limit must be > 0");
    }
};

struct GlimmFunctionals {
    double l = 0.0;
    double q = 0.0;
    double kappa = 0.0;
    double np_total = 0.0;
};

// A left/right pair can meet in the future iff the left family is faster
// (non-physical counts as family 3) or they share a family with at least
// one shock.
inline bool approaching(const Front& left, const Front& right) {
    const int fl = static_cast<int>(left.family);
    const int fr = static_cast<int>(right.family);
    if (fr < fl) return true;
    if (fl == fr && left.family != WaveFamily::np)
        return left.kind == WaveKind::shock || right.kind == WaveKind::shock;
    return false;
}

struct EventRecord {
    long index = 0;
    double t = 0.0;
    double x = 0.0;
    std::array<int, 2> in_ids{-1, -1};
    std::vector<int> out_ids;
    char solver = 'A';  // 'A' accurate, 'S' simplified
    double dl = 0.0;
    double dq = 0.0;
    double np_strength = 0.0;
    std::array<double, 2> in_strength{0.0, 0.0};  // signed
    std::array<WaveFamily, 2> in_family{WaveFamily::f1, WaveFamily::f1};
    std::array<WaveKind, 2> in_kind{WaveKind::shock, WaveKind::shock};
    Vec2 u_minus{};
    Vec2 u_mid{};   // state between the two incoming fronts
    Vec2 u_plus{};
    bool both_physical = false;
    double mu_mass_change = 0.0;
    double weight_sup_increase = std::numeric_limits<double>::quiet_NaN();
};

struct HistorySegment {
    double t0 = 0.0;
    double x0 = 0.0;
    double speed = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
};

struct FrontHistory {
    int id = -1;
    WaveFamily family = WaveFamily::f1;
    WaveKind kind = WaveKind::shock;
    double strength = 0.0;
    Vec2 left{};
    Vec2 right{};
    double birth_t = 0.0;
    double death_t = std::numeric_limits<double>::infinity();
    std::vector<HistorySegment> segments;

    double position(double t) const {
        for (const auto& s : segments)
            if (t <= s.t1) return s.x0 + s.speed * (t - s.t0);
        const auto& s = segments.back();
        return s.x0 + s.speed * (t - s.t0);
    }
};

class FrontSolution {
public:
    FrontSolution(const EulerSystem& sys, EngineParams params, const PiecewiseConstant<Vec2>& u0,
                  TraceProvider traces = {})
        : sys_(sys), p_(std::move(params)), traces_(std::move(traces)),
          windows_(SpeedWindows::from_certificate(sys.certificate())) {
        p_.validate();
        if (p_.policy.mode == ShiftPolicySpec::Mode::dissipation_greedy) {
            if (!traces_) throw ConfigError("dissipation-greedy policy requires reference traces");
            p_.track_weights = true;
        }
        init(u0);
    }

    double time() const { return time_; }
    double lambda_hat() const { return windows_.lambda_hat; }
    const SpeedWindows& windows() const { return windows_; }
    const std::vector<Front>& fronts() const { return fronts_; }
    const std::vector<EventRecord>& events() const { return events_; }
    const std::vector<FrontHistory>& history() const { return history_; }
    double initial_tv() const { return initial_tv_; }

    // Largest state variation seen at any time; exact because the variation
    // only changes at events.
    double max_tv_seen() const { return max_tv_; }

    GlimmFunctionals functionals() const {
        GlimmFunctionals g{l_, q_, p_.kappa, 0.0};
        for (const Front& f : fronts_)
            if (f.family == WaveFamily::np) g.np_total += f.strength;
        return g;
    }

    // Full recomputation; the incremental values must match this.
    GlimmFunctionals glimm() const {
        GlimmFunctionals g{0.0, 0.0, p_.kappa, 0.0};
        for (std::size_t i = 0; i < fronts_.size(); ++i) {
            g.l += fronts_[i].abs_strength();
            if (fronts_[i].family == WaveFamily::np) g.np_total += fronts_[i].strength;
            for (std::size_t j = i + 1; j < fronts_.size(); ++j)
                if (approaching(fronts_[i], fronts_[j]))
                    g.q += fronts_[i].abs_strength() * fronts_[j].abs_strength();
        }
        return g;
    }

    void advance(double t_target) {
        if (!(t_target >= time_)) throw std::range_error("advance: target time is in the past");
        while (true) {
            prune_queue();
            const double tev = queue_.empty() ? std::numeric_limits<double>::infinity() : queue_.top().t;
            const double tcp = next_checkpoint();
            if (tev <= t_target && tev <= tcp) {
                Candidate c = queue_.top();
                queue_.pop();
                process_event(c);
                continue;
            }
            if (tcp <= t_target) {
                time_ = tcp;
                ++cp_index_;
                if (reevaluate_speeds(true)) push_all_candidates();  // speed changes invalidate queue entries
                continue;
            }
            time_ = t_target;
            return;
        }
    }

    Vec2 sample(double t, double x) const {
        if (t < last_change_t_ - 1e-14 || t > time_ + 1e-14)
            throw std::range_error("sample: time outside the current inter-event interval");
        for (const Front& f : fronts_)
            if (f.position(t) > x) return f.left;
        return fronts_.empty() ? constant_state_ : fronts_.back().right;
    }

    PiecewiseConstant<Vec2> snapshot(double t) const {
        if (t < last_change_t_ - 1e-14 || t > time_ + 1e-14)
            throw std::range_error("snapshot: time outside the current inter-event interval");
        PiecewiseConstant<Vec2> pc;
        if (fronts_.empty()) {
            pc.values.push_back(constant_state_);
            return pc;
        }
        for (const Front& f : fronts_) {
            pc.xs.push_back(f.position(t));
            pc.values.push_back(f.left);
        }
        pc.values.push_back(fronts_.back().right);
        return pc;
    }

    WeightProfile weight(double t) const {
        return build_weight(fronts_, t, l_, q_, p_.kappa, p_.weight_c);
    }

    const EngineParams& params() const { return p_; }

private:
    struct Candidate {
        double t = 0.0;
        int left_id = -1;
        int right_id = -1;
        std::uint64_t stamp_left = 0;
        std::uint64_t stamp_right = 0;
        bool operator>(const Candidate& o) const {
            if (t != o.t) return t > o.t;
            if (left_id != o.left_id) return left_id > o.left_id;
            return right_id > o.right_id;
        }
    };

    void init(const PiecewiseConstant<Vec2>& u0) {
        if (!u0.valid() || u0.values.empty()) throw ConfigError("initial data: malformed piecewise function");
        for (const Vec2& v : u0.values)
            if (!sys_.in_box(v)) throw ConfigError("initial data: state outside the certified box");
        initial_tv_ = u0.tv();
        if (initial_tv_ > p_.tv_limit)
            throw ConfigError("initial data: total variation " + std::to_string(initial_tv_) +
                              " exceeds the limit " + std::to_string(p_.tv_limit));
        constant_state_ = u0.values.front();
        for (std::size_t j = 0; j < u0.xs.size(); ++j) {
            const Vec2 um = u0.values[j];
            const Vec2 up = u0.values[j + 1];
            if (norm(up - um) == 0.0) continue;
            FanResult fan = accurate_solve(sys_, um, up, p_.delta_nu, 0.0, u0.xs[j],
                                           rankine_hugoniot_speed_fn(), ids_, p_.solve);
            for (Front& f : fan.fronts) append_front(f);
        }
        recompute_functionals();
        reevaluate_speeds(false);
        push_all_candidates();
        record_tv();
    }

    void record_tv() {
        double tv = 0.0;
        for (const Front& f : fronts_) tv += norm(f.right - f.left);
        max_tv_ = std::max(max_tv_, tv);
    }

    void append_front(Front& f) {
        check_in_box(f.right);
        check_in_box(f.left);
        fronts_.push_back(f);
        stamps_[f.id] = 1;
        FrontHistory h;
        h.id = f.id;
        h.family = f.family;
        h.kind = f.kind;
        h.strength = f.strength;
        h.left = f.left;
        h.right = f.right;
        h.birth_t = f.birth_t;
        h.segments.push_back({f.anchor_t, f.anchor_x, f.speed, std::numeric_limits<double>::infinity()});
        history_.resize(std::max(history_.size(), static_cast<std::size_t>(f.id) + 1));
        history_[f.id] = std::move(h);
    }

    void check_in_box(const Vec2& u) const {
        if (!sys_.in_box(u))
            throw NumericalError("evolution produced a state outside the certified box (rho " +
                                 std::to_string(u.rho) + ", v " + std::to_string(EulerSystem::velocity(u)) + ")");
    }

    double next_checkpoint() const {
        if (p_.checkpoint_dt <= 0.0) return std::numeric_limits<double>::infinity();
        return p_.checkpoint_dt * static_cast<double>(cp_index_);
    }

    void recompute_functionals() {
        const GlimmFunctionals g = glimm();
        l_ = g.l;
        q_ = g.q;
    }

    // Interaction-potential contribution of the front at index i against
    // everything else, skipping the given indices.
    double q_against_others(std::size_t i, std::size_t skip_a, std::size_t skip_b) const {
        double q = 0.0;
        for (std::size_t j = 0; j < fronts_.size(); ++j) {
            if (j == i || j == skip_a || j == skip_b) continue;
            const Front& left = fronts_[std::min(i, j)];
            const Front& right = fronts_[std::max(i, j)];
            if (approaching(left, right)) q += left.abs_strength() * right.abs_strength();
        }
        return q;
    }

    bool set_speed(Front& f, double nominal) {
        // deterministic tie perturbation for physical fronts
        const double s = f.family == WaveFamily::np ? windows_.lambda_hat
                                                    : nominal + static_cast<double>(f.id) * 1e-12;
        if (s == f.speed) return false;
        const double t = time_;
        f.anchor_x = f.position(t);
        f.anchor_t = t;
        f.speed = s;
        last_change_t_ = t;
        ++stamps_[f.id];
        auto& segs = history_[f.id].segments;
        if (segs.back().t0 == t) {
            segs.back() = {t, f.anchor_x, s, std::numeric_limits<double>::infinity()};
        } else {
            segs.back().t1 = t;
            segs.push_back({t, f.anchor_x, s, std::numeric_limits<double>::infinity()});
        }
        return true;
    }

    // Apply the shift policy. Fresh fronts always get a decision; existing
    // shocks are revisited in greedy mode (weights and traces move).
    // Returns whether any speed changed.
    bool reevaluate_speeds(bool only_if_greedy_or_new, std::size_t first_new = 0,
                           std::size_t count_new = std::numeric_limits<std::size_t>::max()) {
        bool changed = false;
        const bool greedy = p_.policy.mode == ShiftPolicySpec::Mode::dissipation_greedy;
        WeightProfile w;
        bool have_w = false;
        if (p_.track_weights) {
            w = weight(time_);
            have_w = true;
        }
        for (std::size_t i = 0; i < fronts_.size(); ++i) {
            Front& f = fronts_[i];
            const bool fresh = i >= first_new && i - first_new < count_new;
            if (only_if_greedy_or_new && !greedy && !fresh) continue;
            if (f.kind == WaveKind::rarefaction) {
                if (fresh) {
                    const auto sp = sys_.eigen(f.right);
                    changed |= set_speed(f, f.family == WaveFamily::f1 ? sp.lambda1 : sp.lambda2);
                }
                continue;
            }
            if (f.family == WaveFamily::np) continue;
            const double x = f.position(time_);
            double al = 1.0, ar = 1.0;
            if (have_w) {
                al = w.eval(x - 1e-13);
                ar = w.eval(x + 1e-13);
            }
            const double rh = detail::rh_speed(f.left, f.right);
            const ShiftDecision d =
                shift_speed(sys_, p_.policy, windows_, f.family, f.left, f.right, rh, al, ar, traces_, time_, x);
            changed |= set_speed(f, d.speed);
        }
        return changed;
    }

    void prune_queue() {
        while (!queue_.empty()) {
            const Candidate& c = queue_.top();
            if (candidate_valid(c)) return;
            queue_.pop();
        }
    }

    bool candidate_valid(const Candidate& c) const {
        const auto sl = stamps_.find(c.left_id);
        const auto sr = stamps_.find(c.right_id);
        if (sl == stamps_.end() || sr == stamps_.end()) return false;
        if (sl->second != c.stamp_left || sr->second != c.stamp_right) return false;
        const int il = index_of_id(c.left_id);
        return il >= 0 && il + 1 < static_cast<int>(fronts_.size()) &&
               fronts_[il + 1].id == c.right_id;
    }

    int index_of_id(int id) const {
        for (std::size_t i = 0; i < fronts_.size(); ++i)
            if (fronts_[i].id == id) return static_cast<int>(i);
        return -1;
    }

    void push_candidate(std::size_t i) {
        if (i + 1 >= fronts_.size()) return;
        const Front& a = fronts_[i];
        const Front& b = fronts_[i + 1];
        if (a.family == WaveFamily::np && b.family == WaveFamily::np) return;  // equal speeds, never meet
        const double rel = a.speed - b.speed;
        if (rel <= 1e-16) return;
        const double gap = b.position(time_) - a.position(time_);
        const double t = time_ + std::max(0.0, gap) / rel;
        queue_.push({t, a.id, b.id, stamps_.at(a.id), stamps_.at(b.id)});
    }

    void push_all_candidates() {
        for (std::size_t i = 0; i + 1 < fronts_.size(); ++i) push_candidate(i);
    }

    void process_event(const Candidate& c) {
        if (static_cast<long>(events_.size()) >= p_.max_events)
            throw NumericalError("exceeded max_events = " + std::to_string(p_.max_events));
        const double t = c.t;
        const int ia = index_of_id(c.left_id);
        const int ib = ia + 1;
        Front a = fronts_[ia];
        Front b = fronts_[ib];
        const double x = 0.5 * (a.position(t) + b.position(t));
        time_ = t;

        // the deterministic perturbation keeps collisions pairwise
        const double scale = 1e-11 * (1.0 + std::fabs(x));
        if (ia > 0 && std::fabs(fronts_[ia - 1].position(t) - x) < scale)
            throw NumericalError("triple collision detected; speed perturbation failed");
        if (ib + 1 < static_cast<int>(fronts_.size()) &&
            std::fabs(fronts_[ib + 1].position(t) - x) < scale)
            throw NumericalError("triple collision detected; speed perturbation failed");
        if (a.family == WaveFamily::np && b.family == WaveFamily::np)
            throw NumericalError("non-physical fronts may not interact");

        EventRecord ev;
        ev.index = static_cast<long>(events_.size());
        ev.t = t;
        ev.x = x;
        ev.in_ids = {a.id, b.id};
        ev.in_strength = {a.strength, b.strength};
        ev.in_family = {a.family, b.family};
        ev.in_kind = {a.kind, b.kind};
        ev.u_minus = a.left;
        ev.u_mid = a.right;
        ev.u_plus = b.right;
        ev.both_physical = is_physical(a.family) && is_physical(b.family);

        const bool use_accurate =
            ev.both_physical && std::fabs(a.strength * b.strength) > p_.eps_nu;
        ev.solver = use_accurate ? 'A' : 'S';

        WeightProfile pre_w;
        if (p_.track_weights) pre_w = weight(t);

        // removed contributions to the functionals
        const double q_removed = q_against_others(ia, ib, ib) + q_against_others(ib, ia, ia) +
                                 (approaching(a, b) ? a.abs_strength() * b.abs_strength() : 0.0);
        const double l_removed = a.abs_strength() + b.abs_strength();
        double mu_in = 0.0;
        if (a.kind == WaveKind::shock) mu_in += (a.family == WaveFamily::f1 ? -1.0 : 1.0) * a.strength;
        if (b.kind == WaveKind::shock) mu_in += (b.family == WaveFamily::f1 ? -1.0 : 1.0) * b.strength;

        FanResult fan;
        if (use_accurate) {
            fan = accurate_solve(sys_, ev.u_minus, ev.u_plus, p_.delta_nu, t, x,
                                 rankine_hugoniot_speed_fn(), ids_, p_.solve);
        } else {
            fan = simplified_solve(sys_, {a, b}, ev.u_minus, ev.u_plus, p_.delta_nu, t, x,
                                   windows_.lambda_hat, rankine_hugoniot_speed_fn(), ids_);
            ev.np_strength = fan.fronts.back().strength;
        }

        // splice
        close_history(a.id, t);
        close_history(b.id, t);
        stamps_.erase(a.id);
        stamps_.erase(b.id);
        fronts_.erase(fronts_.begin() + ia, fronts_.begin() + ib + 1);
        for (std::size_t k = 0; k < fan.fronts.size(); ++k) {
            const Front& f = fan.fronts[k];
            fronts_.insert(fronts_.begin() + ia + static_cast<long>(k), f);
            stamps_[f.id] = 0;  // bumped by set_speed below
            append_history(f);
            ev.out_ids.push_back(f.id);
        }
        last_change_t_ = t;

        // policy speeds for the new fronts (all shocks in greedy mode)
        reevaluate_speeds(true, static_cast<std::size_t>(ia), fan.fronts.size());

        // added contributions
        double q_added = 0.0, l_added = 0.0, mu_out = 0.0;
        for (std::size_t k = 0; k < fan.fronts.size(); ++k) {
            const std::size_t i = ia + k;
            l_added += fronts_[i].abs_strength();
            if (fronts_[i].kind == WaveKind::shock)
                mu_out += (fronts_[i].family == WaveFamily::f1 ? -1.0 : 1.0) * fronts_[i].strength;
            double q_others = 0.0;
            for (std::size_t j = 0; j < fronts_.size(); ++j) {
                if (j >= static_cast<std::size_t>(ia) && j < ia + fan.fronts.size()) continue;
                const Front& left = fronts_[std::min(i, j)];
                const Front& right = fronts_[std::max(i, j)];
                if (approaching(left, right)) q_others += left.abs_strength() * right.abs_strength();
            }
            q_added += q_others;
            for (std::size_t k2 = k + 1; k2 < fan.fronts.size(); ++k2) {
                const Front& right = fronts_[ia + k2];
                if (approaching(fronts_[i], right)) q_added += fronts_[i].abs_strength() * right.abs_strength();
            }
        }

        ev.dl = l_added - l_removed;
        ev.dq = q_added - q_removed;
        l_ += ev.dl;
        q_ += ev.dq;
        ev.mu_mass_change = std::fabs(mu_out - mu_in);

        if (p_.track_weights) {
            const WeightProfile post_w = weight(t);
            ev.weight_sup_increase = sup_difference(post_w, pre_w);
        }

        events_.push_back(std::move(ev));
        record_tv();

        // fresh candidates around the spliced range (greedy re-anchors can
        // invalidate others; push the full set in that case)
        if (p_.policy.mode == ShiftPolicySpec::Mode::dissipation_greedy) {
            push_all_candidates();
        } else {
            if (ia > 0) push_candidate(ia - 1);
            for (std::size_t k = 0; k < fan.fronts.size(); ++k) push_candidate(ia + k);
        }
    }

    void close_history(int id, double t) {
        auto& h = history_[id];
        h.death_t = t;
        h.segments.back().t1 = t;
    }

    void append_history(const Front& f) {
        FrontHistory h;
        h.id = f.id;
        h.family = f.family;
        h.kind = f.kind;
        h.strength = f.strength;
        h.left = f.left;
        h.right = f.right;
        h.birth_t = f.birth_t;
        h.segments.push_back({f.anchor_t, f.anchor_x, f.speed, std::numeric_limits<double>::infinity()});
        history_.resize(std::max(history_.size(), static_cast<std::size_t>(f.id) + 1));
        history_[f.id] = std::move(h);
        check_in_box(f.left);
        check_in_box(f.right);
    }

    const EulerSystem& sys_;
    EngineParams p_;
    TraceProvider traces_;
    SpeedWindows windows_;
    IdGen ids_;
    std::vector<Front> fronts_;
    std::vector<EventRecord> events_;
    std::vector<FrontHistory> history_;
    std::unordered_map<int, std::uint64_t> stamps_;
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<Candidate>> queue_;
    Vec2 constant_state_{};
    double time_ = 0.0;
    double last_change_t_ = 0.0;
    long cp_index_ = 1;
    double l_ = 0.0;
    double q_ = 0.0;
    double initial_tv_ = 0.0;
    double max_tv_ = 0.0;
};

}  // namespace fronttrack
