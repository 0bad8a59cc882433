#pragma once

#include <ttrules/logic.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ttrules
{

/* Handle to a node of a particular store. */
struct bdd_ref
{
  std::uint32_t store = 0;
  std::uint32_t index = 0;

  friend bool operator==( bdd_ref const&, bdd_ref const& ) = default;
};

enum class bdd_op
{
  conjunction,
  disjunction,
  exclusive_or
};

/*! \brief Hash-consed ROBDD node arena.

  Variables are global bit indices; level i of the diagram tests
  order()[i]. Nodes are created only through the unique table and never
  with low == high, so under the fixed order two refs are equal iff they
  denote the same function. No complemented edges.
*/
class bdd_store
{
public:
  explicit bdd_store( std::vector<std::size_t> order );

  static constexpr std::uint32_t terminal_level = 0xffffffffu;

  bdd_ref constant( bool value ) const { return { id_, value ? 1u : 0u }; }
  bdd_ref variable( std::size_t bit );

  bdd_ref apply( bdd_op op, bdd_ref a, bdd_ref b );
  bdd_ref negate( bdd_ref a ) { return apply( bdd_op::exclusive_or, a, constant( true ) ); }

  /* assignment indexed by global bit */
  bool evaluate( bdd_ref f, std::span<std::uint8_t const> assignment ) const;

  bool is_terminal( bdd_ref f ) const;
  std::uint32_t level( bdd_ref f ) const;
  std::size_t bit_of_level( std::uint32_t level ) const { return order_.at( level ); }
  bdd_ref low( bdd_ref f ) const;
  bdd_ref high( bdd_ref f ) const;

  std::vector<std::size_t> const& order() const { return order_; }
  bool has_variable( std::size_t bit ) const { return level_of_.contains( bit ); }

  /* decision nodes allocated in the store */
  std::size_t size() const { return nodes_.size() - 2u; }
  /* decision nodes reachable from f */
  std::size_t node_count( bdd_ref f ) const;
  /* reachable decision nodes of f in depth-first order, high child first */
  std::vector<std::uint32_t> reachable( bdd_ref f ) const;

  /* Walks f and returns the first violated reduction/ordering invariant,
     or an empty string. */
  std::string check_invariants( bdd_ref f ) const;

  void clear_computed_table() { computed_.clear(); }

private:
  struct node
  {
    std::uint32_t level;
    std::uint32_t low;
    std::uint32_t high;
  };

  struct triple_hash
  {
    std::size_t operator()( std::tuple<std::uint32_t, std::uint32_t, std::uint32_t> const& t ) const noexcept;
  };

  void check( bdd_ref f ) const;
  std::uint32_t make_node( std::uint32_t level, std::uint32_t low, std::uint32_t high );
  std::uint32_t apply_rec( bdd_op op, std::uint32_t a, std::uint32_t b );

  std::uint32_t id_;
  std::vector<std::size_t> order_;
  std::unordered_map<std::size_t, std::uint32_t> level_of_;
  std::vector<node> nodes_;
  std::unordered_map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t, triple_hash> unique_;
  std::unordered_map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t, triple_hash> computed_;
};

/* OR of the cube BDDs; throws order_error if a variable is not in the order */
bdd_ref build_from_dnf( bdd_store& store, dnf_formula const& dnf );

/* bdd equals the table on every non-don't-care row */
bool check_equivalence( bdd_store const& store, bdd_ref f, truth_table const& table );

/*! \brief Graphviz description of one diagram.

  Decision nodes are boxes labeled with the bit's name; the false edge has
  a hollow dot at its tail, the true edge is plain. Node identifiers follow
  a depth-first walk, so output is stable for identical stores.
*/
std::string to_dot( bdd_store const& store, bdd_ref f, std::span<std::string const> bit_names, std::string const& graph_name = "rule" );

/* One graph with a cluster per (name, root). */
std::string to_dot( bdd_store const& store, std::span<std::pair<std::string, bdd_ref> const> roots,
                    std::span<std::string const> bit_names, std::string const& graph_name = "rules" );

} // namespace ttrules
