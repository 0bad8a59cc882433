#pragma once

#include <ttrules/logic.hpp>
#include <ttrules/ruleset.hpp>
#include <ttrules/tabular.hpp>
#include <ttrules/ttnet.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ttrules
{

truth_table enumerate_truth_table( ttnet_model const& model, std::size_t filter_id );

/* how often each local row of the patch over `inputs` occurs in data */
std::vector<std::uint32_t> count_patches( std::span<std::size_t const> inputs, binarized_dataset const& data );

struct dont_care_options
{
  bool encoding = true; /* thermometer and one-hot impossibilities */
  bool unseen = false;  /* patches absent from the training support */
};

/* Marks rows that violate the encoding (and, optionally, rows with zero
   support) as don't-care. Outputs are left untouched. */
truth_table inject_dont_cares( truth_table table, binarizer_map const& map, dont_care_options const& options,
                               std::span<std::uint32_t const> support = {} );

/* true when the full input vector satisfies every encoding constraint */
bool is_encodable( std::span<std::uint8_t const> input, binarizer_map const& map );

struct extraction_options
{
  dont_care_options dont_cares;
  std::size_t jobs = 1;
};

/* One rule per filter with a nonzero head weight. `support` supplies the
   training patches for the unseen-pattern flag and may be empty otherwise. */
rule_set extract_rules( ttnet_model const& model, binarizer_map const& map, binarized_dataset const& support,
                        extraction_options const& options = {} );

/* Every input vector of width map.total_bits() (<= 20), optionally only the
   encodable ones, as a dataset with zero targets. */
binarized_dataset enumerate_inputs( binarizer_map const& map, task_type const& task, bool encodable_only );

} // namespace ttrules
