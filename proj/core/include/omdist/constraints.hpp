#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace omdist {

// An unordered pair of symbols. Degenerate (a = a) edges are allowed; they
// act as inert self-loops for connectivity.
struct Edge {
  std::string a, b;

  Edge() = default;
  Edge(std::string x, std::string y) : a(std::move(x)), b(std::move(y)) {
    if (b < a) std::swap(a, b);
  }
  bool degenerate() const { return a == b; }
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// od(short) strictly below od(long).
struct StrictConstraint {
  Edge short_edge, long_edge;
  friend bool operator==(const StrictConstraint&, const StrictConstraint&) = default;
  friend auto operator<=>(const StrictConstraint&, const StrictConstraint&) = default;
};

// od(short) at most od(long).
struct WeakConstraint {
  Edge short_edge, long_edge;
  friend bool operator==(const WeakConstraint&, const WeakConstraint&) = default;
  friend auto operator<=>(const WeakConstraint&, const WeakConstraint&) = default;
};

// before < after on the point line.
struct OrderConstraint {
  std::string before, after;
  friend bool operator==(const OrderConstraint&, const OrderConstraint&) = default;
  friend auto operator<=>(const OrderConstraint&, const OrderConstraint&) = default;
};

// A system of constraints plus its symbol universe. Symbols mentioned by any
// constraint are declared implicitly; add_symbol declares extra ones.
class ConstraintSet {
 public:
  void add_symbol(const std::string& name) { intern(name); }
  void add_strict(const std::string& a, const std::string& b,
                  const std::string& c, const std::string& d) {
    intern(a); intern(b); intern(c); intern(d);
    strict_.push_back({Edge(a, b), Edge(c, d)});
  }
  void add_weak(const std::string& a, const std::string& b,
                const std::string& c, const std::string& d) {
    intern(a); intern(b); intern(c); intern(d);
    weak_.push_back({Edge(a, b), Edge(c, d)});
  }
  void add_order(const std::string& before, const std::string& after) {
    intern(before); intern(after);
    order_.push_back({before, after});
  }

  const std::vector<StrictConstraint>& strict() const { return strict_; }
  const std::vector<WeakConstraint>& weak() const { return weak_; }
  const std::vector<OrderConstraint>& order() const { return order_; }
  // In first-mention order.
  const std::vector<std::string>& symbols() const { return names_; }

  std::size_t symbol_count() const { return names_.size(); }
  std::size_t strict_count() const { return strict_.size(); }
  std::size_t weak_count() const { return weak_.size(); }
  std::size_t order_count() const { return order_.size(); }
  bool empty() const {
    return strict_.empty() && weak_.empty() && order_.empty() && names_.empty();
  }

 private:
  void intern(const std::string& name) {
    auto [it, inserted] = index_.try_emplace(name, names_.size());
    if (inserted) names_.push_back(name);
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<StrictConstraint> strict_;
  std::vector<WeakConstraint> weak_;
  std::vector<OrderConstraint> order_;
};

}  // namespace omdist
