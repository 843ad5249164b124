// Copyright 2026 The thermosched Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "thermosched/exact_search.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <sstream>

namespace thermosched {

const char* to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kSmPower: return "sm_power";
    case ObjectiveKind::kLrUbPower: return "lr_ub_power";
    case ObjectiveKind::kIdleMin: return "idle_min";
    case ObjectiveKind::kIdleMax: return "idle_max";
    case ObjectiveKind::kFeasibilityOnly: return "feasibility_only";
  }
  return "unknown";
}

const char* to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::kOptimal: return "optimal";
    case SearchStatus::kFeasible: return "feasible";
    case SearchStatus::kFeasibleTimeout: return "feasible_timeout";
    case SearchStatus::kInfeasible: return "infeasible";
    case SearchStatus::kUnknownTimeout: return "unknown_timeout";
  }
  return "unknown";
}

double objective_value(const Instance& instance, const Assignment& assignment,
                       const ObjectiveSpec& objective) {
  switch (objective.kind) {
    case ObjectiveKind::kSmPower:
      return schedule_power(instance, assignment, PowerModel::kSM).watts;
    case ObjectiveKind::kLrUbPower:
      if (!objective.coefficients) {
        throw InputError("LR-UB objective needs regression coefficients");
      }
      return schedule_power(instance, assignment, PowerModel::kLRUB,
                            &*objective.coefficients)
          .watts;
    case ObjectiveKind::kIdleMin:
    case ObjectiveKind::kIdleMax:
      return static_cast<double>(total_idle_time(instance, assignment));
    case ObjectiveKind::kFeasibilityOnly:
      return 0.0;
  }
  return 0.0;
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

double elapsed_ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_partial(const Instance& instance, const PartialFix& partial) {
  if (static_cast<int>(partial.cluster.size()) != instance.task_count()) {
    std::ostringstream os;
    os << "partial fix covers " << partial.cluster.size() << " tasks; instance has "
       << instance.task_count();
    throw InputError(os.str());
  }
  for (std::size_t t = 0; t < partial.cluster.size(); ++t) {
    const auto& k = partial.cluster[t];
    if (k && (*k < 0 || *k >= instance.cluster_count())) {
      std::ostringstream os;
      os << "task " << instance.tasks[t].id << " fixed to cluster " << *k + 1
         << ", which does not exist";
      throw InputError(os.str());
    }
  }
}

void check_objective(const Instance& instance, const ObjectiveSpec& objective) {
  if (objective.kind == ObjectiveKind::kLrUbPower) {
    if (!objective.coefficients) {
      throw InputError("LR-UB objective needs regression coefficients");
    }
    objective.coefficients->require_compatible(instance.platform);
  }
}

// Minimizes an internal cost. SM and LR-UB costs are h times the above-idle
// power; IDLE_MIN minimizes -processing and IDLE_MAX minimizes processing.
class BranchAndBound {
 public:
  BranchAndBound(const Instance& instance, const ObjectiveSpec& objective,
                 const PartialFix& partial, std::int64_t time_limit_ms)
      : inst_(instance),
        kind_(objective.kind),
        n_(instance.task_count()),
        m_(instance.cluster_count()),
        q_(instance.max_windows),
        h_(instance.major_frame_ms),
        deadline_(Clock::now() + std::chrono::milliseconds(time_limit_ms)) {
    prepare(objective, partial);
  }

  SearchResult run() {
    const auto start = Clock::now();
    SearchResult result;
    const double root_bound = bound(0);
    if (n_ == 0) {
      best_cost_ = 0.0;
      best_.clear();
      have_best_ = true;
    } else {
      dfs(0, root_bound);
    }
    result.nodes_explored = nodes_;
    const double proven =
        timed_out_ ? std::min(best_cost_, open_bound_) : best_cost_;
    if (have_best_) {
      result.assignment = assemble();
      result.status = timed_out_ ? SearchStatus::kFeasibleTimeout : SearchStatus::kOptimal;
      result.objective_value = to_objective(best_cost_);
      result.lower_bound = timed_out_ ? to_objective(proven) : result.objective_value;
      if (kind_ == ObjectiveKind::kFeasibilityOnly) {
        result.status = SearchStatus::kOptimal;
        result.lower_bound = 0.0;
      }
    } else if (timed_out_) {
      result.status = SearchStatus::kUnknownTimeout;
      result.objective_value = kind_ == ObjectiveKind::kIdleMax ? -kInf : kInf;
      result.lower_bound = to_objective(std::min(open_bound_, root_bound));
    } else {
      result.status = SearchStatus::kInfeasible;
      result.objective_value = kind_ == ObjectiveKind::kIdleMax ? -kInf : kInf;
      result.lower_bound = result.objective_value;
    }
    result.elapsed_ms = elapsed_ms_since(start);
    return result;
  }

 private:
  struct Option {
    int task;
    Millis e;
    double a_e;      // SM activity term a * e
    double offset;   // b
    double star;     // LR-UB weight a * beta_1 + b * beta_2
  };

  struct Child {
    int window;
    int cluster;
    double delta;       // incremental cost
    Millis growth;      // window length increase
    double bound;
  };

  void prepare(const ObjectiveSpec& objective, const PartialFix& partial) {
    total_cores_ = inst_.platform.total_cores();
    options_.resize(static_cast<std::size_t>(n_));
    allowed_.resize(static_cast<std::size_t>(n_));
    min_e_.assign(static_cast<std::size_t>(n_), 0);
    for (int t = 0; t < n_; ++t) {
      auto& opts = options_[static_cast<std::size_t>(t)];
      for (int k = 0; k < m_; ++k) {
        const TaskOnCluster& tc = inst_.on(t, k);
        double star = 0.0;
        if (objective.coefficients && kind_ == ObjectiveKind::kLrUbPower) {
          star = objective.coefficients->weight(k, tc.activity_coef, tc.offset_coef);
        }
        opts.push_back({t, tc.exec_time_ms,
                        tc.activity_coef * static_cast<double>(tc.exec_time_ms),
                        tc.offset_coef, star});
        const auto& fix = partial.cluster[static_cast<std::size_t>(t)];
        if (!fix || *fix == k) allowed_[static_cast<std::size_t>(t)].push_back(k);
      }
      Millis me = std::numeric_limits<Millis>::max();
      for (int k : allowed_[static_cast<std::size_t>(t)]) me = std::min(me, opts[static_cast<std::size_t>(k)].e);
      min_e_[static_cast<std::size_t>(t)] = me;
    }

    // Hardest-to-place first: decreasing shortest admissible execution time.
    order_.resize(static_cast<std::size_t>(n_));
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int x, int y) {
      return min_e_[static_cast<std::size_t>(x)] > min_e_[static_cast<std::size_t>(y)];
    });

    all_star_nonneg_ = true;
    for (int t = 0; t < n_; ++t) {
      for (int k : allowed_[static_cast<std::size_t>(t)]) {
        if (option(t, k).star < 0.0) all_star_nonneg_ = false;
      }
    }

    // Suffix sums over the branching order of each unassigned task's best
    // possible stand-alone contribution.
    suffix_.assign(static_cast<std::size_t>(n_ + 1), 0.0);
    suffix_min_offset_.assign(static_cast<std::size_t>(n_ + 1), kInf);
    for (int d = n_ - 1; d >= 0; --d) {
      const int t = order_[static_cast<std::size_t>(d)];
      double best = kInf;
      double min_off = kInf;
      for (int k : allowed_[static_cast<std::size_t>(t)]) {
        const Option& o = option(t, k);
        double v = 0.0;
        switch (kind_) {
          case ObjectiveKind::kSmPower: v = o.a_e; break;
          case ObjectiveKind::kLrUbPower: v = o.star * static_cast<double>(o.e); break;
          case ObjectiveKind::kIdleMin: v = -static_cast<double>(o.e); break;
          case ObjectiveKind::kIdleMax: v = static_cast<double>(o.e); break;
          case ObjectiveKind::kFeasibilityOnly: v = 0.0; break;
        }
        best = std::min(best, v);
        min_off = std::min(min_off, o.offset);
      }
      if (allowed_[static_cast<std::size_t>(t)].empty()) best = 0.0;
      suffix_[static_cast<std::size_t>(d)] = suffix_[static_cast<std::size_t>(d + 1)] + best;
      suffix_min_offset_[static_cast<std::size_t>(d)] =
          std::min(suffix_min_offset_[static_cast<std::size_t>(d + 1)], min_off);
    }

    only_cluster_.assign(static_cast<std::size_t>(n_), -1);
    for (int t = 0; t < n_; ++t) {
      const auto& allowed = allowed_[static_cast<std::size_t>(t)];
      if (allowed.size() == 1) only_cluster_[static_cast<std::size_t>(t)] = allowed.front();
    }
    pending_.assign(static_cast<std::size_t>(m_), 0);
    free_.assign(static_cast<std::size_t>(m_), 0);

    count_.assign(static_cast<std::size_t>(q_ * m_), 0);
    length_.assign(static_cast<std::size_t>(q_), 0);
    load_.assign(static_cast<std::size_t>(q_), 0);
    max_offset_.assign(static_cast<std::size_t>(q_), -kInf);
    star_pos_.assign(static_cast<std::size_t>(q_), 0.0);
    star_neg_.assign(static_cast<std::size_t>(q_), 0.0);
    where_.assign(static_cast<std::size_t>(n_), Placement{});
  }

  const Option& option(int task, int cluster) const {
    return options_[static_cast<std::size_t>(task)][static_cast<std::size_t>(cluster)];
  }

  double to_objective(double cost) const {
    const double h = static_cast<double>(h_);
    const double cap = static_cast<double>(h_) * total_cores_;
    switch (kind_) {
      case ObjectiveKind::kSmPower:
      case ObjectiveKind::kLrUbPower:
        return inst_.platform.idle_power_watts + cost / h;
      case ObjectiveKind::kIdleMin: return cap + cost;
      case ObjectiveKind::kIdleMax: return cap - cost;
      case ObjectiveKind::kFeasibilityOnly: return 0.0;
    }
    return cost;
  }

  // Admissible lower bound on the cost of any completion of the current
  // state with `depth` tasks placed.
  double bound(int depth) const {
    const double slack = static_cast<double>(h_ - sum_length_);
    double b = suffix_[static_cast<std::size_t>(depth)];
    switch (kind_) {
      case ObjectiveKind::kSmPower: {
        // Existing windows can only grow and raise their max offset; extra
        // length costs at least min(0, smallest relevant offset) per ms.
        double worst_rate = std::min(0.0, suffix_min_offset_[static_cast<std::size_t>(depth)]);
        double fixed = activity_;
        for (int j = 0; j < used_; ++j) {
          const double mo = max_offset_[static_cast<std::size_t>(j)];
          fixed += static_cast<double>(length_[static_cast<std::size_t>(j)]) * mo;
          worst_rate = std::min(worst_rate, mo);
        }
        return fixed + b + worst_rate * slack;
      }
      case ObjectiveKind::kLrUbPower: {
        double fixed = 0.0;
        Millis longest = 0;
        for (int j = 0; j < used_; ++j) {
          const double l = static_cast<double>(length_[static_cast<std::size_t>(j)]);
          fixed += l * star_pos_[static_cast<std::size_t>(j)] +
                   (l + slack) * star_neg_[static_cast<std::size_t>(j)];
          longest = std::max(longest, length_[static_cast<std::size_t>(j)]);
        }
        if (!all_star_nonneg_) {
          // Negative weights: each remaining task pays at least its weight
          // times the longest length its window can reach.
          b = 0.0;
          const double reach = static_cast<double>(longest) + slack;
          for (int d = depth; d < n_; ++d) {
            const int t = order_[static_cast<std::size_t>(d)];
            double best = kInf;
            for (int k : allowed_[static_cast<std::size_t>(t)]) {
              const Option& o = option(t, k);
              best = std::min(best, o.star >= 0.0 ? o.star * static_cast<double>(o.e)
                                                  : o.star * reach);
            }
            b += best;
          }
        }
        return fixed + b;
      }
      case ObjectiveKind::kIdleMin:
        return -static_cast<double>(processing_) + b;
      case ObjectiveKind::kIdleMax:
        return static_cast<double>(processing_) + b;
      case ObjectiveKind::kFeasibilityOnly:
        return 0.0;
    }
    return b;
  }

  // Exact cost of the placed tasks.
  double current_cost() const {
    switch (kind_) {
      case ObjectiveKind::kSmPower: {
        double c = activity_;
        for (int j = 0; j < used_; ++j) {
          c += static_cast<double>(length_[static_cast<std::size_t>(j)]) *
               max_offset_[static_cast<std::size_t>(j)];
        }
        return c;
      }
      case ObjectiveKind::kLrUbPower: {
        double c = 0.0;
        for (int j = 0; j < used_; ++j) {
          const auto js = static_cast<std::size_t>(j);
          c += static_cast<double>(length_[js]) * (star_pos_[js] + star_neg_[js]);
        }
        return c;
      }
      case ObjectiveKind::kIdleMin: return -static_cast<double>(processing_);
      case ObjectiveKind::kIdleMax: return static_cast<double>(processing_);
      case ObjectiveKind::kFeasibilityOnly: return 0.0;
    }
    return 0.0;
  }

  // Cheap necessary condition for completing the current partial placement:
  // every remaining task must fit somewhere without overflowing the frame.
  bool completable(int depth) const {
    if (depth >= n_) return true;
    const Millis slack = h_ - sum_length_;
    const bool free_window = used_ < q_;
    if (free_window && slack >= min_e_[static_cast<std::size_t>(order_[static_cast<std::size_t>(depth)])]) {
      return true;  // every remaining task fits a fresh window
    }
    Millis worst = 0;
    for (int d = depth; d < n_; ++d) {
      const int t = order_[static_cast<std::size_t>(d)];
      Millis best = std::numeric_limits<Millis>::max();
      for (int k : allowed_[static_cast<std::size_t>(t)]) {
        const Millis e = option(t, k).e;
        for (int j = 0; j < used_; ++j) {
          if (count_[static_cast<std::size_t>(j * m_ + k)] >= inst_.cores(k)) continue;
          best = std::min(best, std::max<Millis>(0, e - length_[static_cast<std::size_t>(j)]));
        }
        if (free_window) best = std::min(best, e);
      }
      worst = std::max(worst, best);
      if (worst > slack) return false;
    }
    return true;
  }

  // Lower bound on the final frame length. For every threshold theta, the
  // windows longer than theta must hold every remaining task that is longer
  // than theta on each admissible cluster, and tasks restricted to one
  // cluster also need room on that cluster. Integrating the window count over
  // theta bounds the summed window lengths.
  bool frame_can_hold_rest(int depth) {
    if (depth >= n_) return true;
    by_length_.clear();
    for (int j = 0; j < used_; ++j) by_length_.push_back(j);
    std::sort(by_length_.begin(), by_length_.end(), [&](int x, int y) {
      return length_[static_cast<std::size_t>(x)] > length_[static_cast<std::size_t>(y)];
    });
    std::fill(pending_.begin(), pending_.end(), 0);
    std::fill(free_.begin(), free_.end(), 0);
    int pending_all = 0;
    int free_all = 0;
    int windows = 0;
    std::size_t w = 0;
    int d = depth;
    Millis total = 0;
    while (w < by_length_.size() || d < n_) {
      const Millis wl = w < by_length_.size()
                            ? length_[static_cast<std::size_t>(by_length_[w])]
                            : -1;
      const Millis tl = d < n_ ? min_e_[static_cast<std::size_t>(order_[static_cast<std::size_t>(d)])]
                               : -1;
      const Millis v = std::max(wl, tl);
      while (w < by_length_.size() &&
             length_[static_cast<std::size_t>(by_length_[w])] == v) {
        const int j = by_length_[w++];
        ++windows;
        for (int k = 0; k < m_; ++k) {
          const int f = inst_.cores(k) - count_[static_cast<std::size_t>(j * m_ + k)];
          free_[static_cast<std::size_t>(k)] += f;
          free_all += f;
        }
      }
      while (d < n_ && min_e_[static_cast<std::size_t>(order_[static_cast<std::size_t>(d)])] == v) {
        const int t = order_[static_cast<std::size_t>(d++)];
        ++pending_all;
        const int only = only_cluster_[static_cast<std::size_t>(t)];
        if (only >= 0) ++pending_[static_cast<std::size_t>(only)];
      }
      int extra = ceil_div(std::max(0, pending_all - free_all), total_cores_);
      for (int k = 0; k < m_; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        extra = std::max(extra, ceil_div(std::max(0, pending_[ks] - free_[ks]), inst_.cores(k)));
      }
      if (windows + extra > q_) return false;
      Millis next = 0;
      if (w < by_length_.size()) next = length_[static_cast<std::size_t>(by_length_[w])];
      if (d < n_) {
        next = std::max(next, min_e_[static_cast<std::size_t>(order_[static_cast<std::size_t>(d)])]);
      }
      total += static_cast<Millis>(windows + extra) * (v - next);
      if (total > h_) return false;
    }
    return true;
  }

  static int ceil_div(int a, int b) { return (a + b - 1) / b; }

  bool out_of_time() {
    if ((nodes_ & 255) == 0 && Clock::now() >= deadline_) timed_out_ = true;
    return timed_out_;
  }

  void place(int t, int j, int k) {
    const Option& o = option(t, k);
    const auto js = static_cast<std::size_t>(j);
    if (load_[js] == 0) ++used_;
    ++load_[js];
    ++count_[static_cast<std::size_t>(j * m_ + k)];
    const Millis grown = std::max(length_[js], o.e);
    sum_length_ += grown - length_[js];
    length_[js] = grown;
    activity_ += o.a_e;
    processing_ += o.e;
    (o.star >= 0.0 ? star_pos_[js] : star_neg_[js]) += o.star;
    where_[static_cast<std::size_t>(t)] = {j, k};
  }

  struct Saved {
    Millis length;
    double max_offset;
  };

  void unplace(int t, int j, int k, const Saved& saved) {
    const Option& o = option(t, k);
    const auto js = static_cast<std::size_t>(j);
    --load_[js];
    if (load_[js] == 0) --used_;
    --count_[static_cast<std::size_t>(j * m_ + k)];
    sum_length_ -= length_[js] - saved.length;
    length_[js] = saved.length;
    max_offset_[js] = saved.max_offset;
    activity_ -= o.a_e;
    processing_ -= o.e;
    (o.star >= 0.0 ? star_pos_[js] : star_neg_[js]) -= o.star;
  }

  void dfs(int depth, double node_bound) {
    ++nodes_;
    if (out_of_time()) {
      open_bound_ = std::min(open_bound_, node_bound);
      return;
    }
    if (depth < n_ && !frame_can_hold_rest(depth)) return;
    if (depth == n_) {
      const double cost = current_cost();
      if (!have_best_ || cost < best_cost_) {
        best_cost_ = cost;
        best_ = where_;
        have_best_ = true;
        if (kind_ == ObjectiveKind::kFeasibilityOnly) stop_ = true;
      }
      return;
    }

    const int t = order_[static_cast<std::size_t>(depth)];
    const double cost_before = current_cost();
    std::vector<Child> children;
    const int window_limit = std::min(used_ + 1, q_);
    for (int k : allowed_[static_cast<std::size_t>(t)]) {
      const Option& o = option(t, k);
      for (int j = 0; j < window_limit; ++j) {
        const auto js = static_cast<std::size_t>(j);
        if (count_[static_cast<std::size_t>(j * m_ + k)] >= inst_.cores(k)) continue;
        const Millis growth = std::max<Millis>(0, o.e - length_[js]);
        if (sum_length_ + growth > h_) continue;
        const Saved saved{length_[js], max_offset_[js]};
        max_offset_[js] = std::max(max_offset_[js], o.offset);
        place(t, j, k);
        Child c{j, k, 0.0, growth, 0.0};
        if (completable(depth + 1)) {
          c.bound = bound(depth + 1);
          c.delta = kind_ == ObjectiveKind::kFeasibilityOnly
                        ? static_cast<double>(growth)
                        : current_cost() - cost_before;
          children.push_back(c);
        }
        unplace(t, j, k, saved);
      }
    }
    std::sort(children.begin(), children.end(), [](const Child& x, const Child& y) {
      if (x.delta != y.delta) return x.delta < y.delta;
      if (x.growth != y.growth) return x.growth < y.growth;
      if (x.cluster != y.cluster) return x.cluster < y.cluster;
      return x.window < y.window;
    });

    for (const Child& c : children) {
      if (stop_) return;
      if (have_best_ && c.bound >= best_cost_ - tolerance()) continue;
      const auto js = static_cast<std::size_t>(c.window);
      const Saved saved{length_[js], max_offset_[js]};
      max_offset_[js] = std::max(max_offset_[js], option(t, c.cluster).offset);
      place(t, c.window, c.cluster);
      dfs(depth + 1, c.bound);
      unplace(t, c.window, c.cluster, saved);
      if (timed_out_) {
        open_bound_ = std::min(open_bound_, node_bound);
        return;
      }
    }
  }

  double tolerance() const { return 1e-12 * std::max(1.0, std::abs(best_cost_)); }

  Assignment assemble() const {
    std::vector<Placement> placements(best_.begin(), best_.end());
    return make_assignment(inst_, std::move(placements));
  }

  const Instance& inst_;
  ObjectiveKind kind_;
  int n_;
  int m_;
  int q_;
  Millis h_;
  Clock::time_point deadline_;
  int total_cores_ = 0;

  std::vector<std::vector<Option>> options_;
  std::vector<std::vector<int>> allowed_;
  std::vector<Millis> min_e_;
  std::vector<int> order_;
  std::vector<double> suffix_;
  std::vector<double> suffix_min_offset_;
  bool all_star_nonneg_ = true;
  std::vector<int> only_cluster_;
  std::vector<int> by_length_;
  std::vector<int> pending_;
  std::vector<int> free_;

  std::vector<int> count_;
  std::vector<Millis> length_;
  std::vector<int> load_;
  std::vector<double> max_offset_;
  std::vector<double> star_pos_;
  std::vector<double> star_neg_;
  std::vector<Placement> where_;
  int used_ = 0;
  Millis sum_length_ = 0;
  double activity_ = 0.0;
  Millis processing_ = 0;

  std::vector<Placement> best_;
  double best_cost_ = kInf;
  bool have_best_ = false;
  bool stop_ = false;
  bool timed_out_ = false;
  double open_bound_ = kInf;
  std::int64_t nodes_ = 0;
};

// The idle and feasibility objectives depend only on which cluster each task
// runs on. Once clusters are fixed, the shortest frame is obtained by sorting
// every cluster's tasks by decreasing execution time and letting window j take
// the j-th group of q_k tasks on each cluster k; for every threshold theta
// that layout has exactly max_k ceil(N_k(theta) / q_k) windows longer than
// theta, which no placement can beat. The search therefore branches on
// clusters only and checks the frame with that count.
class ClusterSearch {
 public:
  ClusterSearch(const Instance& instance, ObjectiveKind kind, const PartialFix& partial,
                std::int64_t time_limit_ms)
      : inst_(instance),
        kind_(kind),
        n_(instance.task_count()),
        m_(instance.cluster_count()),
        deadline_(Clock::now() + std::chrono::milliseconds(time_limit_ms)) {
    total_cores_ = inst_.platform.total_cores();
    allowed_.resize(static_cast<std::size_t>(n_));
    min_e_.assign(static_cast<std::size_t>(n_), 0);
    only_.assign(static_cast<std::size_t>(n_), -1);
    for (int t = 0; t < n_; ++t) {
      auto& allowed = allowed_[static_cast<std::size_t>(t)];
      const auto& fix = partial.cluster[static_cast<std::size_t>(t)];
      for (int k = 0; k < m_; ++k) {
        if (!fix || *fix == k) allowed.push_back(k);
      }
      std::stable_sort(allowed.begin(), allowed.end(), [&](int x, int y) {
        const Millis ex = inst_.on(t, x).exec_time_ms;
        const Millis ey = inst_.on(t, y).exec_time_ms;
        return kind_ == ObjectiveKind::kIdleMin ? ex > ey : ex < ey;
      });
      Millis me = std::numeric_limits<Millis>::max();
      for (int k : allowed) me = std::min(me, inst_.on(t, k).exec_time_ms);
      min_e_[static_cast<std::size_t>(t)] = me;
      if (allowed.size() == 1) only_[static_cast<std::size_t>(t)] = allowed.front();
    }
    order_.resize(static_cast<std::size_t>(n_));
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int x, int y) {
      return min_e_[static_cast<std::size_t>(x)] > min_e_[static_cast<std::size_t>(y)];
    });
    suffix_.assign(static_cast<std::size_t>(n_ + 1), 0.0);
    for (int d = n_ - 1; d >= 0; --d) {
      const int t = order_[static_cast<std::size_t>(d)];
      double best = 0.0;
      if (!allowed_[static_cast<std::size_t>(t)].empty()) {
        best = cost_of(t, allowed_[static_cast<std::size_t>(t)].front());
      }
      suffix_[static_cast<std::size_t>(d)] = suffix_[static_cast<std::size_t>(d + 1)] + best;
    }
    cluster_of_.assign(static_cast<std::size_t>(n_), -1);
    pending_.assign(static_cast<std::size_t>(m_), 0);
  }

  SearchResult run() {
    const auto start = Clock::now();
    SearchResult result;
    const double root_bound = suffix_[0];
    if (n_ == 0) {
      have_best_ = true;
      best_cost_ = 0.0;
    } else {
      dfs(0, 0.0);
    }
    result.nodes_explored = nodes_;
    if (have_best_) {
      result.assignment = assemble();
      result.status = timed_out_ ? SearchStatus::kFeasibleTimeout : SearchStatus::kOptimal;
      result.objective_value = to_objective(best_cost_);
      result.lower_bound = timed_out_ ? to_objective(std::min(best_cost_, open_bound_))
                                      : result.objective_value;
      if (kind_ == ObjectiveKind::kFeasibilityOnly) {
        result.status = SearchStatus::kOptimal;
        result.lower_bound = 0.0;
      }
    } else if (timed_out_) {
      result.status = SearchStatus::kUnknownTimeout;
      result.objective_value = kind_ == ObjectiveKind::kIdleMax ? -kInf : kInf;
      result.lower_bound = to_objective(std::min(open_bound_, root_bound));
    } else {
      result.status = SearchStatus::kInfeasible;
      result.objective_value = kind_ == ObjectiveKind::kIdleMax ? -kInf : kInf;
      result.lower_bound = result.objective_value;
    }
    result.elapsed_ms = elapsed_ms_since(start);
    return result;
  }

 private:
  // IDLE_MAX minimizes processing time, IDLE_MIN maximizes it.
  double cost_of(int t, int k) const {
    const double e = static_cast<double>(inst_.on(t, k).exec_time_ms);
    switch (kind_) {
      case ObjectiveKind::kIdleMax: return e;
      case ObjectiveKind::kIdleMin: return -e;
      default: return 0.0;
    }
  }

  double to_objective(double cost) const {
    const double cap = static_cast<double>(inst_.major_frame_ms) * total_cores_;
    switch (kind_) {
      case ObjectiveKind::kIdleMin: return cap + cost;
      case ObjectiveKind::kIdleMax: return cap - cost;
      default: return 0.0;
    }
  }

  // Integrates, over every threshold, a lower bound on the number of windows
  // longer than it: placed tasks count on their cluster, unplaced tasks on
  // their single usable cluster or against the total core count.
  bool frame_fits(int depth, double headroom) {
    events_.clear();
    for (int d = 0; d < depth; ++d) {
      const int t = order_[static_cast<std::size_t>(d)];
      const int k = cluster_of_[static_cast<std::size_t>(t)];
      events_.push_back({inst_.on(t, k).exec_time_ms, k});
    }
    for (int d = depth; d < n_; ++d) {
      const int t = order_[static_cast<std::size_t>(d)];
      const auto& allowed = allowed_[static_cast<std::size_t>(t)];
      // Clusters costing at least `headroom` more than the task's cheapest
      // cannot lead to an improvement over the incumbent.
      int usable = -1;
      int count = 0;
      Millis shortest = std::numeric_limits<Millis>::max();
      const double cheapest = cost_of(t, allowed.front());
      for (int k : allowed) {
        if (cost_of(t, k) - cheapest >= headroom) continue;
        ++count;
        usable = k;
        shortest = std::min(shortest, inst_.on(t, k).exec_time_ms);
      }
      if (count == 0) return false;
      events_.push_back({shortest, count == 1 ? usable : -1});
    }
    std::sort(events_.begin(), events_.end(),
              [](const Event& a, const Event& b) { return a.e > b.e; });
    std::fill(pending_.begin(), pending_.end(), 0);
    int all = 0;
    Millis total = 0;
    for (std::size_t i = 0; i < events_.size();) {
      const Millis v = events_[i].e;
      while (i < events_.size() && events_[i].e == v) {
        ++all;
        if (events_[i].cluster >= 0) ++pending_[static_cast<std::size_t>(events_[i].cluster)];
        ++i;
      }
      int windows = (all + total_cores_ - 1) / total_cores_;
      for (int k = 0; k < m_; ++k) {
        const int q = inst_.cores(k);
        windows = std::max(windows, (pending_[static_cast<std::size_t>(k)] + q - 1) / q);
      }
      if (windows > inst_.max_windows) return false;
      const Millis next = i < events_.size() ? events_[i].e : 0;
      total += static_cast<Millis>(windows) * (v - next);
      if (total > inst_.major_frame_ms) return false;
    }
    return true;
  }

  void dfs(int depth, double cost) {
    ++nodes_;
    const double node_bound = cost + suffix_[static_cast<std::size_t>(depth)];
    if ((nodes_ & 255) == 0 && Clock::now() >= deadline_) timed_out_ = true;
    if (timed_out_) {
      open_bound_ = std::min(open_bound_, node_bound);
      return;
    }
    const double headroom = have_best_ ? best_cost_ - 1e-9 - node_bound : kInf;
    if (!frame_fits(depth, headroom)) return;
    if (depth == n_) {
      if (!have_best_ || cost < best_cost_) {
        best_cost_ = cost;
        best_ = cluster_of_;
        have_best_ = true;
        if (kind_ == ObjectiveKind::kFeasibilityOnly) stop_ = true;
      }
      return;
    }
    const int t = order_[static_cast<std::size_t>(depth)];
    for (int k : allowed_[static_cast<std::size_t>(t)]) {
      if (stop_) return;
      const double child = cost + cost_of(t, k);
      const double child_bound = child + suffix_[static_cast<std::size_t>(depth + 1)];
      if (have_best_ && child_bound >= best_cost_ - 1e-9) continue;
      cluster_of_[static_cast<std::size_t>(t)] = k;
      dfs(depth + 1, child);
      cluster_of_[static_cast<std::size_t>(t)] = -1;
      if (timed_out_) {
        open_bound_ = std::min(open_bound_, node_bound);
        return;
      }
    }
  }

  Assignment assemble() const {
    std::vector<Placement> placements(static_cast<std::size_t>(n_));
    for (int k = 0; k < m_; ++k) {
      std::vector<int> tasks;
      for (int t = 0; t < n_; ++t) {
        if (best_[static_cast<std::size_t>(t)] == k) tasks.push_back(t);
      }
      std::stable_sort(tasks.begin(), tasks.end(), [&](int x, int y) {
        return inst_.on(x, k).exec_time_ms > inst_.on(y, k).exec_time_ms;
      });
      for (std::size_t r = 0; r < tasks.size(); ++r) {
        placements[static_cast<std::size_t>(tasks[r])] =
            Placement{static_cast<int>(r) / inst_.cores(k), k};
      }
    }
    return make_assignment(inst_, std::move(placements));
  }

  struct Event {
    Millis e;
    int cluster;  // -1 when the task may still run anywhere
  };

  const Instance& inst_;
  ObjectiveKind kind_;
  int n_;
  int m_;
  Clock::time_point deadline_;
  int total_cores_ = 0;
  std::vector<std::vector<int>> allowed_;
  std::vector<Millis> min_e_;
  std::vector<int> only_;
  std::vector<int> order_;
  std::vector<double> suffix_;
  std::vector<int> cluster_of_;
  std::vector<int> pending_;
  std::vector<Event> events_;
  std::vector<int> best_;
  double best_cost_ = kInf;
  bool have_best_ = false;
  bool stop_ = false;
  bool timed_out_ = false;
  double open_bound_ = kInf;
  std::int64_t nodes_ = 0;
};

}  // namespace

SearchResult solve(const Instance& instance, const ObjectiveSpec& objective,
                   const PartialFix& partial, std::int64_t time_limit_ms) {
  check_partial(instance, partial);
  check_objective(instance, objective);
  if (time_limit_ms < 1) throw InputError("time limit must be at least 1 ms");
  switch (objective.kind) {
    case ObjectiveKind::kIdleMin:
    case ObjectiveKind::kIdleMax:
    case ObjectiveKind::kFeasibilityOnly:
      return ClusterSearch(instance, objective.kind, partial, time_limit_ms).run();
    default:
      return BranchAndBound(instance, objective, partial, time_limit_ms).run();
  }
}

namespace {

class Enumerator {
 public:
  Enumerator(const Instance& instance, const ObjectiveSpec& objective,
             const PartialFix& partial)
      : inst_(instance), objective_(objective), partial_(partial) {}

  SearchResult run() {
    const auto start = Clock::now();
    const int n = inst_.task_count();
    placements_.assign(static_cast<std::size_t>(n), Placement{});
    lengths_.assign(static_cast<std::size_t>(inst_.max_windows), 0);
    counts_.assign(static_cast<std::size_t>(inst_.max_windows * inst_.cluster_count()), 0);
    recurse(0, 0);

    SearchResult r;
    r.nodes_explored = leaves_;
    if (best_) {
      r.status = SearchStatus::kOptimal;
      r.assignment = best_;
      r.objective_value = best_value_;
      r.lower_bound = best_value_;
    } else {
      r.status = SearchStatus::kInfeasible;
      const bool maximize = objective_.sense() == Sense::kMaximize;
      r.objective_value = maximize ? -kInf : kInf;
      r.lower_bound = r.objective_value;
    }
    r.elapsed_ms = elapsed_ms_since(start);
    return r;
  }

 private:
  void recurse(int t, int used) {
    if (stop_) return;
    const int n = inst_.task_count();
    if (t == n) {
      ++leaves_;
      Assignment a = make_assignment(inst_, placements_);
      if (!check_feasible(inst_, a).feasible) return;
      const double v = objective_value(inst_, a, objective_);
      const bool better = !best_ || (objective_.sense() == Sense::kMaximize
                                         ? v > best_value_
                                         : v < best_value_);
      if (better) {
        best_ = std::move(a);
        best_value_ = v;
        if (objective_.kind == ObjectiveKind::kFeasibilityOnly) stop_ = true;
      }
      return;
    }
    const int m = inst_.cluster_count();
    const auto& fix = partial_.cluster[static_cast<std::size_t>(t)];
    const int windows = std::min(used + 1, inst_.max_windows);
    for (int j = 0; j < windows; ++j) {
      for (int k = 0; k < m; ++k) {
        if (fix && *fix != k) continue;
        auto& c = counts_[static_cast<std::size_t>(j * m + k)];
        if (c >= inst_.cores(k)) continue;
        const Millis before = lengths_[static_cast<std::size_t>(j)];
        const Millis after = std::max(before, inst_.on(t, k).exec_time_ms);
        // Window lengths only grow, so an overfull prefix stays overfull.
        if (std::accumulate(lengths_.begin(), lengths_.end(), Millis{0}) - before +
                after > inst_.major_frame_ms) {
          continue;
        }
        ++c;
        lengths_[static_cast<std::size_t>(j)] = after;
        placements_[static_cast<std::size_t>(t)] = {j, k};
        recurse(t + 1, std::max(used, j + 1));
        lengths_[static_cast<std::size_t>(j)] = before;
        --c;
      }
    }
  }

  const Instance& inst_;
  const ObjectiveSpec& objective_;
  const PartialFix& partial_;
  std::vector<Placement> placements_;
  std::vector<Millis> lengths_;
  std::vector<int> counts_;
  std::optional<Assignment> best_;
  double best_value_ = 0.0;
  std::int64_t leaves_ = 0;
  bool stop_ = false;
};

}  // namespace

SearchResult brute_force_optimum(const Instance& instance,
                                 const ObjectiveSpec& objective,
                                 const PartialFix& partial) {
  if (instance.task_count() > 10 || instance.max_windows > 5) {
    std::ostringstream os;
    os << "brute force limited to 10 tasks and 5 windows; got "
       << instance.task_count() << " tasks and " << instance.max_windows
       << " windows";
    throw InputError(os.str());
  }
  check_partial(instance, partial);
  check_objective(instance, objective);
  Enumerator e(instance, objective, partial);
  return e.run();
}

}  // namespace thermosched
