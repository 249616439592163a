#include "willis/errors.hpp"

#include <string>

namespace willis {

ExceptionalPointError::ExceptionalPointError(double omega, Eigen::VectorXd k, double rcond)
    : Error("exceptional point: restricted impedance singular (rcond=" + std::to_string(rcond) +
            ", omega=" + std::to_string(omega) + ")"),
      omega_(omega), k_(std::move(k)), rcond_(rcond) {}

OnBranchError::OnBranchError(double omega, Eigen::VectorXd k, double rcond)
    : Error("point on a Bloch branch: full impedance singular (rcond=" + std::to_string(rcond) +
            ", omega=" + std::to_string(omega) + ")"),
      omega_(omega), k_(std::move(k)), rcond_(rcond) {}

}  // namespace willis
