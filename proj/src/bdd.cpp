#include <ttrules/bdd.hpp>

#include <ttrules/error.hpp>

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>

namespace ttrules
{

namespace
{

std::atomic<std::uint32_t> next_store_id{ 1 };

constexpr std::uint32_t false_index = 0;
constexpr std::uint32_t true_index = 1;

} // namespace

std::size_t bdd_store::triple_hash::operator()( std::tuple<std::uint32_t, std::uint32_t, std::uint32_t> const& t ) const noexcept
{
  auto h = static_cast<std::uint64_t>( std::get<0>( t ) ) * 0x9e3779b97f4a7c15ull;
  h ^= static_cast<std::uint64_t>( std::get<1>( t ) ) + 0x7f4a7c159e3779b9ull + ( h << 6 ) + ( h >> 2 );
  h ^= static_cast<std::uint64_t>( std::get<2>( t ) ) + 0x94d049bb133111ebull + ( h << 6 ) + ( h >> 2 );
  return static_cast<std::size_t>( h );
}

bdd_store::bdd_store( std::vector<std::size_t> order ) : id_( next_store_id++ ), order_( std::move( order ) )
{
  for ( auto i = 0u; i < order_.size(); ++i )
    if ( !level_of_.emplace( order_[i], i ).second )
      throw order_error( "bit " + std::to_string( order_[i] ) + " appears twice in the variable order" );
  nodes_.push_back( { terminal_level, false_index, false_index } );
  nodes_.push_back( { terminal_level, true_index, true_index } );
}

void bdd_store::check( bdd_ref f ) const
{
  if ( f.store != id_ )
    throw store_error( "node reference belongs to a different store" );
  if ( f.index >= nodes_.size() )
    throw store_error( "dangling node reference" );
}

bdd_ref bdd_store::variable( std::size_t bit )
{
  auto const it = level_of_.find( bit );
  if ( it == level_of_.end() )
    throw order_error( "bit " + std::to_string( bit ) + " is not in the variable order" );
  return { id_, make_node( it->second, false_index, true_index ) };
}

std::uint32_t bdd_store::make_node( std::uint32_t level, std::uint32_t low, std::uint32_t high )
{
  if ( low == high )
    return low;
  auto const key = std::make_tuple( level, low, high );
  auto const it = unique_.find( key );
  if ( it != unique_.end() )
    return it->second;
  auto const index = static_cast<std::uint32_t>( nodes_.size() );
  nodes_.push_back( { level, low, high } );
  unique_.emplace( key, index );
  return index;
}

std::uint32_t bdd_store::apply_rec( bdd_op op, std::uint32_t a, std::uint32_t b )
{
  switch ( op )
  {
  case bdd_op::conjunction:
    if ( a == false_index || b == false_index )
      return false_index;
    if ( a == true_index || a == b )
      return b;
    if ( b == true_index )
      return a;
    break;
  case bdd_op::disjunction:
    if ( a == true_index || b == true_index )
      return true_index;
    if ( a == false_index || a == b )
      return b;
    if ( b == false_index )
      return a;
    break;
  case bdd_op::exclusive_or:
    if ( a == b )
      return false_index;
    if ( a == false_index )
      return b;
    if ( b == false_index )
      return a;
    if ( a <= true_index && b <= true_index )
      return a ^ b;
    break;
  }
  if ( a > b )
    std::swap( a, b ); /* all three operators commute */

  auto const key = std::make_tuple( static_cast<std::uint32_t>( op ), a, b );
  if ( auto const it = computed_.find( key ); it != computed_.end() )
    return it->second;

  auto const la = nodes_[a].level;
  auto const lb = nodes_[b].level;
  auto const top = std::min( la, lb );
  auto const a0 = la == top ? nodes_[a].low : a;
  auto const a1 = la == top ? nodes_[a].high : a;
  auto const b0 = lb == top ? nodes_[b].low : b;
  auto const b1 = lb == top ? nodes_[b].high : b;
  auto const low = apply_rec( op, a0, b0 );
  auto const high = apply_rec( op, a1, b1 );
  auto const result = make_node( top, low, high );
  computed_.emplace( key, result );
  return result;
}

bdd_ref bdd_store::apply( bdd_op op, bdd_ref a, bdd_ref b )
{
  check( a );
  check( b );
  return { id_, apply_rec( op, a.index, b.index ) };
}

bool bdd_store::evaluate( bdd_ref f, std::span<std::uint8_t const> assignment ) const
{
  check( f );
  auto i = f.index;
  while ( i > true_index )
  {
    auto const& n = nodes_[i];
    auto const bit = order_[n.level];
    if ( bit >= assignment.size() )
      throw shape_error( "assignment does not cover bit " + std::to_string( bit ) );
    i = assignment[bit] ? n.high : n.low;
  }
  return i == true_index;
}

bool bdd_store::is_terminal( bdd_ref f ) const
{
  check( f );
  return f.index <= true_index;
}

std::uint32_t bdd_store::level( bdd_ref f ) const
{
  check( f );
  return nodes_[f.index].level;
}

bdd_ref bdd_store::low( bdd_ref f ) const
{
  check( f );
  return { id_, nodes_[f.index].low };
}

bdd_ref bdd_store::high( bdd_ref f ) const
{
  check( f );
  return { id_, nodes_[f.index].high };
}

std::vector<std::uint32_t> bdd_store::reachable( bdd_ref f ) const
{
  check( f );
  std::vector<std::uint32_t> out;
  std::vector<std::uint8_t> seen( nodes_.size(), 0u );
  std::vector<std::uint32_t> stack{ f.index };
  while ( !stack.empty() )
  {
    auto const i = stack.back();
    stack.pop_back();
    if ( i <= true_index || seen[i] )
      continue;
    seen[i] = 1u;
    out.push_back( i );
    stack.push_back( nodes_[i].low );
    stack.push_back( nodes_[i].high );
  }
  return out;
}

std::size_t bdd_store::node_count( bdd_ref f ) const
{
  return reachable( f ).size();
}

std::string bdd_store::check_invariants( bdd_ref f ) const
{
  std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> triples;
  for ( auto const i : reachable( f ) )
  {
    auto const& n = nodes_[i];
    if ( n.low == n.high )
      return "node " + std::to_string( i ) + " has identical children";
    if ( n.level >= order_.size() )
      return "node " + std::to_string( i ) + " has an invalid level";
    if ( nodes_[n.low].level <= n.level || nodes_[n.high].level <= n.level )
      return "node " + std::to_string( i ) + " violates the variable order";
    if ( !triples.emplace( n.level, n.low, n.high ).second )
      return "node " + std::to_string( i ) + " duplicates another node";
    auto const it = unique_.find( std::make_tuple( n.level, n.low, n.high ) );
    if ( it == unique_.end() || it->second != i )
      return "node " + std::to_string( i ) + " is missing from the unique table";
  }
  return {};
}

bdd_ref build_from_dnf( bdd_store& store, dnf_formula const& dnf )
{
  for ( auto const bit : dnf.inputs )
    if ( !store.has_variable( bit ) )
      throw order_error( "bit " + std::to_string( bit ) + " is not in the variable order" );

  auto result = store.constant( false );
  for ( auto const& c : dnf.cubes )
  {
    auto term = store.constant( true );
    for ( auto j = 0u; j < dnf.k(); ++j )
    {
      if ( !( ( c.care >> j ) & 1u ) )
        continue;
      auto literal = store.variable( dnf.inputs[j] );
      if ( !( ( c.value >> j ) & 1u ) )
        literal = store.negate( literal );
      term = store.apply( bdd_op::conjunction, term, literal );
    }
    result = store.apply( bdd_op::disjunction, result, term );
  }
  return result;
}

bool check_equivalence( bdd_store const& store, bdd_ref f, truth_table const& table )
{
  std::size_t width = 0;
  for ( auto const bit : table.inputs )
    width = std::max( width, bit + 1 );
  for ( auto const bit : store.order() )
    width = std::max( width, bit + 1 );
  std::vector<std::uint8_t> assignment( width, 0u );
  for ( std::uint32_t r = 0; r < table.rows(); ++r )
  {
    if ( table.dont_care[r] )
      continue;
    for ( auto j = 0u; j < table.k(); ++j )
      assignment[table.inputs[j]] = ( r >> j ) & 1u;
    if ( store.evaluate( f, assignment ) != static_cast<bool>( table.outputs[r] ) )
      return false;
  }
  return true;
}

namespace
{

std::string quote( std::string const& text )
{
  std::string out = "\"";
  for ( auto const c : text )
  {
    if ( c == '"' || c == '\\' )
      out.push_back( '\\' );
    if ( c == '\n' )
    {
      out += "\\n";
      continue;
    }
    out.push_back( c );
  }
  out.push_back( '"' );
  return out;
}

void emit_body( std::ostream& os, bdd_store const& store, bdd_ref f, std::span<std::string const> bit_names,
                std::string const& prefix, std::string const& indent )
{
  auto const nodes = store.reachable( f );
  std::unordered_map<std::uint32_t, std::size_t> id;
  for ( auto i = 0u; i < nodes.size(); ++i )
    id.emplace( nodes[i], i );

  auto name = [&]( bdd_ref r ) {
    if ( store.is_terminal( r ) )
      return prefix + ( r.index == 1u ? "t1" : "t0" );
    return prefix + "n" + std::to_string( id.at( r.index ) );
  };

  bool uses_false = f.index == 0u;
  bool uses_true = f.index == 1u;
  for ( auto const i : nodes )
  {
    bdd_ref const r{ f.store, i };
    auto const bit = store.bit_of_level( store.level( r ) );
    auto const label = bit < bit_names.size() ? bit_names[bit] : "x" + std::to_string( bit );
    os << indent << name( r ) << " [label=" << quote( label ) << "];\n";
    uses_false = uses_false || store.low( r ).index == 0u || store.high( r ).index == 0u;
    uses_true = uses_true || store.low( r ).index == 1u || store.high( r ).index == 1u;
  }
  if ( uses_false )
    os << indent << prefix << "t0 [label=\"0\", style=bold];\n";
  if ( uses_true )
    os << indent << prefix << "t1 [label=\"1\", style=bold];\n";
  for ( auto const i : nodes )
  {
    bdd_ref const r{ f.store, i };
    os << indent << name( r ) << " -> " << name( store.low( r ) ) << " [dir=both, arrowtail=odot];\n";
    os << indent << name( r ) << " -> " << name( store.high( r ) ) << ";\n";
  }
}

} // namespace

std::string to_dot( bdd_store const& store, bdd_ref f, std::span<std::string const> bit_names, std::string const& graph_name )
{
  std::ostringstream os;
  os << "digraph " << quote( graph_name ) << " {\n";
  os << "  node [shape=box];\n";
  emit_body( os, store, f, bit_names, "", "  " );
  os << "}\n";
  return os.str();
}

std::string to_dot( bdd_store const& store, std::span<std::pair<std::string, bdd_ref> const> roots,
                    std::span<std::string const> bit_names, std::string const& graph_name )
{
  std::ostringstream os;
  os << "digraph " << quote( graph_name ) << " {\n";
  os << "  node [shape=box];\n";
  for ( auto i = 0u; i < roots.size(); ++i )
  {
    os << "  subgraph " << quote( "cluster_" + std::to_string( i ) ) << " {\n";
    os << "    label=" << quote( roots[i].first ) << ";\n";
    emit_body( os, store, roots[i].second, bit_names, "r" + std::to_string( i ) + "_", "    " );
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace ttrules
