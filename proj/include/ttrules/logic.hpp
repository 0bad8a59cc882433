#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ttrules
{

/*! \brief Conjunction of literals over k <= 16 local variables.

  Variable j is fixed when bit j of `care` is set; its required value is
  bit j of `value`. A cube covers row r iff (r & care) == value, i.e.
  exactly 2^(k - popcount(care)) rows.
*/
struct cube
{
  std::uint16_t care = 0;
  std::uint16_t value = 0;

  bool covers( std::uint32_t row ) const { return ( row & care ) == value; }

  friend auto operator<=>( cube const&, cube const& ) = default;
};

/* '0', '1' or '-' per local variable, variable 0 first */
std::string to_string( cube const& c, std::size_t k );
cube parse_cube( std::string const& text );

/* Complete truth table of a k-input function. Row r assigns bit j of r to
   input j. Rows flagged in dont_care are unconstrained. */
struct truth_table
{
  std::vector<std::size_t> inputs; /* global bit indices */
  std::vector<std::uint8_t> outputs;
  std::vector<std::uint8_t> dont_care;
  std::size_t origin = 0; /* source filter */

  std::size_t k() const { return inputs.size(); }
  std::size_t rows() const { return outputs.size(); }
};

/* DNF over the global bits in `inputs`: OR over cubes of AND over literals. */
struct dnf_formula
{
  std::vector<std::size_t> inputs;
  std::vector<cube> cubes;

  std::size_t k() const { return inputs.size(); }

  /* value on local row r */
  bool evaluate_row( std::uint32_t row ) const;
  /* value on a full input vector indexed by global bit */
  bool evaluate( std::span<std::uint8_t const> input ) const;

  friend bool operator==( dnf_formula const&, dnf_formula const& ) = default;
};

/* canonical minterm DNF: one cube per on-set row */
dnf_formula minterm_dnf( truth_table const& table );

/* outputs of the formula on all 2^k local rows */
std::vector<std::uint8_t> formula_table( dnf_formula const& formula );

/* true when the formula matches the table on every non-don't-care row */
bool agrees( dnf_formula const& formula, truth_table const& table );

/*! \brief Two-level minimization by Quine-McCluskey.

  Prime implicants are generated over the on-set and don't-care set; the
  on-set is then covered by the essential primes followed by greedily
  choosing the prime covering most uncovered on-set rows (ties: smallest
  uncovered row covered, then prime order). Zero cubes for an empty on-set.
*/
dnf_formula minimize_qm( truth_table const& table );

/* all prime implicants of on-set plus don't-cares, in canonical order */
std::vector<cube> prime_implicants( truth_table const& table );

} // namespace ttrules
