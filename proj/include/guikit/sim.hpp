#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace guikit {

// --- Configuration ---

struct NodeProfile {
    double latency_base = 1.0;    // per-sample inference time scale
    double latency_spread = 0.25; // log-normal sigma; 0 disables the noise
    double proc_time = 0.5;       // advantage/gradient prep time per result group
};

struct StealSettings {
    bool enabled = true;
    int trigger = 0;               // steal when local backlog <= trigger
    double transfer_latency = 0.1; // result groups are expensive to move
};

struct SimConfig {
    std::vector<int> groups_per_node;  // one entry per node
    std::vector<NodeProfile> nodes;    // same length
    int num_generations = 8;           // samples per task
    int task_count = 1;
    int sync_condition = 1;            // processed groups per policy update
    double update_duration = 1.0;
    StealSettings steal;
    std::uint64_t seed = 0;

    void check() const {
        if (groups_per_node.empty())
            throw std::invalid_argument("config: at least one node required");
        if (nodes.size() != groups_per_node.size())
            throw std::invalid_argument("config: nodes and groups_per_node length mismatch");
        for (int g : groups_per_node)
            if (g < 1) throw std::invalid_argument("config: groups_per_node entries must be >= 1");
        for (const auto& n : nodes) {
            if (n.latency_base <= 0.0)
                throw std::invalid_argument("config: latency_base must be > 0");
            if (n.latency_spread < 0.0)
                throw std::invalid_argument("config: latency_spread must be >= 0");
            if (n.proc_time < 0.0)
                throw std::invalid_argument("config: proc_time must be >= 0");
        }
        if (num_generations < 1)
            throw std::invalid_argument("config: num_generations must be >= 1");
        if (task_count < 1)
            throw std::invalid_argument("config: task_count must be >= 1");
        if (sync_condition < 1 || sync_condition > task_count)
            throw std::invalid_argument("config: sync_condition must be in [1, task_count]");
        if (update_duration < 0.0)
            throw std::invalid_argument("config: update_duration must be >= 0");
        if (steal.trigger < 0)
            throw std::invalid_argument("config: steal trigger must be >= 0");
        if (steal.transfer_latency < 0.0)
            throw std::invalid_argument("config: transfer_latency must be >= 0");
    }
};

inline SimConfig sim_config_from_json(const nlohmann::json& j) {
    SimConfig c;
    c.groups_per_node = j.at("groups_per_node").get<std::vector<int>>();
    c.num_generations = j.value("num_generations", 8);
    c.task_count = j.at("task_count").get<int>();
    c.sync_condition = j.at("sync_condition").get<int>();
    c.update_duration = j.value("update_duration", 1.0);
    c.seed = j.value("seed", std::uint64_t{0});
    for (const auto& nj : j.at("nodes")) {
        NodeProfile p;
        p.latency_base = nj.value("latency_base", 1.0);
        p.latency_spread = nj.value("latency_spread", 0.25);
        p.proc_time = nj.value("proc_time", 0.5);
        c.nodes.push_back(p);
    }
    if (j.contains("steal")) {
        const auto& sj = j["steal"];
        c.steal.enabled = sj.value("enabled", true);
        c.steal.trigger = sj.value("trigger", 0);
        c.steal.transfer_latency = sj.value("transfer_latency", 0.1);
    }
    c.check();
    return c;
}

// --- Outputs ---

struct GroupStats {
    int node = 0;
    int index = 0;
    double busy = 0.0;
    double idle = 0.0;
};

struct SimReport {
    double total_virtual_time = 0.0;
    std::vector<GroupStats> groups;
    double utilization = 0.0;
    std::int64_t updates_performed = 0;
    std::int64_t steal_count = 0;
    std::int64_t samples_completed = 0;
    std::int64_t groups_consumed = 0;
    std::int64_t tasks_dispatched = 0;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["total_virtual_time"] = total_virtual_time;
        j["utilization"] = utilization;
        j["updates_performed"] = updates_performed;
        j["steal_count"] = steal_count;
        j["samples_completed"] = samples_completed;
        j["groups_consumed"] = groups_consumed;
        j["tasks_dispatched"] = tasks_dispatched;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& g : groups) {
            nlohmann::ordered_json gj;
            gj["node"] = g.node;
            gj["index"] = g.index;
            gj["busy"] = g.busy;
            gj["idle"] = g.idle;
            arr.push_back(gj);
        }
        j["groups"] = arr;
        return j;
    }
};

struct SimEvent {
    double virtual_time = 0.0;
    enum class Kind {
        dispatch,
        inference_complete,
        proc_complete,
        steal_request,
        steal_transfer,
        sync_broadcast,
        update_done
    } kind = Kind::dispatch;
    int node = -1;
    int group = -1;
    int task = -1;
    int policy_version = 0;
};

inline const char* sim_event_name(SimEvent::Kind k) {
    switch (k) {
        case SimEvent::Kind::dispatch: return "dispatch";
        case SimEvent::Kind::inference_complete: return "inference_complete";
        case SimEvent::Kind::proc_complete: return "proc_complete";
        case SimEvent::Kind::steal_request: return "steal_request";
        case SimEvent::Kind::steal_transfer: return "steal_transfer";
        case SimEvent::Kind::sync_broadcast: return "sync_broadcast";
        case SimEvent::Kind::update_done: return "update_done";
    }
    return "";
}

// Chooses the peer to steal from: the one with the largest backlog, provided
// the local backlog is at or below the trigger and some peer holds strictly
// more than we do. Ties break toward the lowest peer id.
inline std::optional<int> work_steal_policy(int local_backlog,
                                            std::span<const int> peer_backlogs,
                                            int trigger) {
    if (local_backlog > trigger) return std::nullopt;
    std::optional<int> best;
    int best_size = local_backlog;
    for (int i = 0; i < static_cast<int>(peer_backlogs.size()); ++i) {
        if (peer_backlogs[i] > best_size) {
            best = i;
            best_size = peer_backlogs[i];
        }
    }
    return best;
}

inline bool sync_check(std::int64_t completed_groups, const SimConfig& config) {
    return completed_groups >= config.sync_condition;
}

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Virtual-clock discrete-event simulation of the asynchronous rollout system:
// a global task queue feeds GPU groups, each completed task's N samples form a
// result group processed by the owning node, nodes steal result groups across
// node boundaries, and a global barrier consumes processed groups per update.
class RolloutSimulation {
public:
    explicit RolloutSimulation(const SimConfig& config, std::vector<SimEvent>* trace)
        : cfg_(config), trace_(trace) {
        cfg_.check();
        const int n_nodes = static_cast<int>(cfg_.groups_per_node.size());
        node_state_.resize(n_nodes);
        for (int n = 0; n < n_nodes; ++n)
            for (int g = 0; g < cfg_.groups_per_node[n]; ++g)
                gpu_groups_.push_back(GpuGroup{n, g});
        for (int t = 0; t < cfg_.task_count; ++t) task_queue_.push_back(t);
        stage_.assign(cfg_.task_count, Stage::pending);
    }

    SimReport run() {
        pump(0.0);
        while (!done_) {
            if (queue_.empty())
                throw std::logic_error("simulation deadlock: no pending events");
            const Scheduled ev = queue_.top();
            queue_.pop();
            now_ = ev.time;
            switch (ev.kind) {
                case SimEvent::Kind::inference_complete: on_inference(ev); break;
                case SimEvent::Kind::proc_complete: on_processed(ev); break;
                case SimEvent::Kind::steal_transfer: on_steal_transfer(ev); break;
                case SimEvent::Kind::update_done: on_update_done(ev); break;
                default:
                    throw std::logic_error("unexpected scheduled event kind");
            }
            pump(now_);
        }
        return make_report();
    }

private:
    enum class Stage { pending, dispatched, completed, processed, consumed };

    struct GpuGroup {
        int node;
        int index;
        bool busy = false;
        int task = -1;
        double busy_time = 0.0;
        double started = 0.0;
    };

    struct NodeState {
        std::deque<int> backlog;   // completed result groups awaiting processing
        bool processing = false;
        int processing_task = -1;
        bool steal_inflight = false;
    };

    struct Scheduled {
        double time;
        SimEvent::Kind kind;
        int id;   // tie-break id (gpu group index, node, ...)
        int node = -1;
        int group = -1;
        int task = -1;

        bool operator>(const Scheduled& o) const {
            if (time != o.time) return time > o.time;
            if (kind != o.kind) return kind > o.kind;
            return id > o.id;
        }
    };

    void advance(int task, Stage from, Stage to) {
        if (stage_[task] != from)
            throw std::logic_error("task lifecycle violated for task " +
                                   std::to_string(task));
        stage_[task] = to;
    }

    void record(SimEvent::Kind kind, int node, int group, int task) {
        if (trace_)
            trace_->push_back({now_, kind, node, group, task, policy_version_});
    }

    double inference_duration(int task, int node) const {
        std::mt19937_64 eng(mix64(cfg_.seed) ^ mix64(static_cast<std::uint64_t>(task) + 1));
        const auto& profile = cfg_.nodes[node];
        double total = 0.0;
        for (int k = 0; k < cfg_.num_generations; ++k) {
            double draw = 1.0;
            if (profile.latency_spread > 0.0) {
                std::lognormal_distribution<double> dist(0.0, profile.latency_spread);
                draw = dist(eng);
            }
            total += profile.latency_base * draw;
        }
        return total;
    }

    void on_inference(const Scheduled& ev) {
        auto& g = gpu_groups_[ev.id];
        advance(ev.task, Stage::dispatched, Stage::completed);
        g.busy = false;
        g.busy_time += now_ - g.started;
        g.task = -1;
        samples_completed_ += cfg_.num_generations;
        node_state_[g.node].backlog.push_back(ev.task);
        record(SimEvent::Kind::inference_complete, g.node, g.index, ev.task);
    }

    void on_processed(const Scheduled& ev) {
        auto& node = node_state_[ev.node];
        advance(ev.task, Stage::completed, Stage::processed);
        node.processing = false;
        node.processing_task = -1;
        processed_unconsumed_.push_back(ev.task);
        ++processed_since_update_;
        record(SimEvent::Kind::proc_complete, ev.node, -1, ev.task);
    }

    void on_steal_transfer(const Scheduled& ev) {
        auto& node = node_state_[ev.node];
        node.steal_inflight = false;
        node.backlog.push_back(ev.task);
        record(SimEvent::Kind::steal_transfer, ev.node, -1, ev.task);
    }

    void on_update_done(const Scheduled&) {
        for (int task : processed_unconsumed_) {
            advance(task, Stage::processed, Stage::consumed);
            ++groups_consumed_;
        }
        processed_unconsumed_.clear();
        processed_since_update_ = 0;
        ++updates_performed_;
        ++policy_version_;
        update_in_progress_ = false;
        record(SimEvent::Kind::update_done, -1, -1, -1);
    }

    void begin_update() {
        update_in_progress_ = true;
        record(SimEvent::Kind::sync_broadcast, -1, -1, -1);
        queue_.push({now_ + cfg_.update_duration, SimEvent::Kind::update_done, 0});
    }

    void pump(double t) {
        now_ = t;
        const int n_nodes = static_cast<int>(node_state_.size());

        // Start node processors on queued result groups.
        for (int n = 0; n < n_nodes; ++n) {
            auto& node = node_state_[n];
            if (!node.processing && !node.backlog.empty()) {
                const int task = node.backlog.front();
                node.backlog.pop_front();
                node.processing = true;
                node.processing_task = task;
                Scheduled ev{now_ + cfg_.nodes[n].proc_time,
                             SimEvent::Kind::proc_complete, n};
                ev.node = n;
                ev.task = task;
                queue_.push(ev);
            }
        }

        // Inter-node work stealing of completed result groups.
        if (cfg_.steal.enabled && n_nodes > 1) {
            for (int n = 0; n < n_nodes; ++n) {
                auto& node = node_state_[n];
                if (node.steal_inflight) continue;
                const int local = static_cast<int>(node.backlog.size());
                std::vector<int> peers;
                std::vector<int> peer_ids;
                for (int p = 0; p < n_nodes; ++p) {
                    if (p == n) continue;
                    peers.push_back(static_cast<int>(node_state_[p].backlog.size()));
                    peer_ids.push_back(p);
                }
                auto choice = work_steal_policy(local, peers, cfg_.steal.trigger);
                if (!choice) continue;
                // A busy stealer only parks the group in its backlog, so insist
                // on an imbalance of at least two; each such transfer shrinks
                // the imbalance and the exchange terminates. An idle stealer
                // consumes the group immediately.
                if (node.processing && peers[*choice] <= local + 1) continue;
                auto& victim = node_state_[peer_ids[*choice]];
                const int task = victim.backlog.back();  // newest result
                victim.backlog.pop_back();
                node.steal_inflight = true;
                ++steal_count_;
                record(SimEvent::Kind::steal_request, n, -1, task);
                Scheduled ev{now_ + cfg_.steal.transfer_latency,
                             SimEvent::Kind::steal_transfer, n};
                ev.node = n;
                ev.task = task;
                queue_.push(ev);
            }
        }

        // Dispatch from the global queue to idle GPU groups; rollout is paused
        // while a policy update is in flight.
        if (!update_in_progress_) {
            for (int gi = 0; gi < static_cast<int>(gpu_groups_.size()); ++gi) {
                auto& g = gpu_groups_[gi];
                if (g.busy || task_queue_.empty()) continue;
                const int task = task_queue_.front();
                task_queue_.pop_front();
                advance(task, Stage::pending, Stage::dispatched);
                g.busy = true;
                g.task = task;
                g.started = now_;
                ++tasks_dispatched_;
                record(SimEvent::Kind::dispatch, g.node, g.index, task);
                Scheduled ev{now_ + inference_duration(task, g.node),
                             SimEvent::Kind::inference_complete, gi};
                ev.node = g.node;
                ev.group = g.index;
                ev.task = task;
                queue_.push(ev);
            }
        }

        if (!update_in_progress_ &&
            sync_check(processed_since_update_, cfg_)) {
            begin_update();
            return;
        }

        // Drained: flush remaining processed groups with a final update, then stop.
        if (!update_in_progress_ && task_queue_.empty() && all_quiet()) {
            if (!processed_unconsumed_.empty()) {
                begin_update();
            } else {
                for (const auto s : stage_)
                    if (s != Stage::consumed)
                        throw std::logic_error("termination with unconsumed task");
                total_time_ = now_;
                done_ = true;
            }
        }
    }

    bool all_quiet() const {
        for (const auto& g : gpu_groups_)
            if (g.busy) return false;
        for (const auto& n : node_state_)
            if (n.processing || n.steal_inflight || !n.backlog.empty()) return false;
        return true;
    }

    SimReport make_report() const {
        SimReport r;
        r.total_virtual_time = total_time_;
        double busy_sum = 0.0;
        for (const auto& g : gpu_groups_) {
            GroupStats s;
            s.node = g.node;
            s.index = g.index;
            s.busy = g.busy_time;
            s.idle = total_time_ - g.busy_time;
            busy_sum += g.busy_time;
            r.groups.push_back(s);
        }
        const double denom = total_time_ * static_cast<double>(gpu_groups_.size());
        r.utilization = denom > 0.0 ? busy_sum / denom : 0.0;
        r.updates_performed = updates_performed_;
        r.steal_count = steal_count_;
        r.samples_completed = samples_completed_;
        r.groups_consumed = groups_consumed_;
        r.tasks_dispatched = tasks_dispatched_;
        return r;
    }

    SimConfig cfg_;
    std::vector<SimEvent>* trace_;
    std::vector<GpuGroup> gpu_groups_;
    std::vector<NodeState> node_state_;
    std::deque<int> task_queue_;
    std::vector<Stage> stage_;
    std::priority_queue<Scheduled, std::vector<Scheduled>, std::greater<Scheduled>> queue_;
    std::vector<int> processed_unconsumed_;
    std::int64_t processed_since_update_ = 0;
    std::int64_t updates_performed_ = 0;
    std::int64_t steal_count_ = 0;
    std::int64_t samples_completed_ = 0;
    std::int64_t groups_consumed_ = 0;
    std::int64_t tasks_dispatched_ = 0;
    int policy_version_ = 0;
    bool update_in_progress_ = false;
    bool done_ = false;
    double now_ = 0.0;
    double total_time_ = 0.0;
};

}  // namespace detail

inline SimReport run_simulation(const SimConfig& config,
                                std::vector<SimEvent>* trace = nullptr) {
    return detail::RolloutSimulation(config, trace).run();
}

}  // namespace guikit
