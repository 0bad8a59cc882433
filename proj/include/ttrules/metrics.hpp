#pragma once

#include <span>

namespace ttrules
{

/*! \brief Area under the ROC curve, Mann-Whitney form.

  Fraction of (positive, negative) pairs ranked correctly, ties counted as
  one half. Labels are 0/1. Throws metric_error if only one class is present.
*/
double auc( std::span<double const> scores, std::span<double const> labels );

double accuracy( std::span<double const> predictions, std::span<double const> labels );

double rmse( std::span<double const> predictions, std::span<double const> targets );

} // namespace ttrules
