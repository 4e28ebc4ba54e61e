#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace evans {

using cplx = std::complex<double>;

using Vec4 = Eigen::Matrix<cplx, 4, 1>;
using Vec5 = Eigen::Matrix<cplx, 5, 1>;
using Vec6 = Eigen::Matrix<cplx, 6, 1>;
using Vec10 = Eigen::Matrix<cplx, 10, 1>;
using Mat5 = Eigen::Matrix<cplx, 5, 5>;
using Mat10 = Eigen::Matrix<cplx, 10, 10>;

// Thermal conduction index, shared by every module.
struct ModelParams {
    double nu = 2.5;
};

// Dimensionless normal-mode triple; r = gamma/beta.
struct ModeParams {
    double alpha = 0.0;
    double beta = 1.0;
    cplx gamma{0.0, 0.0};

    cplx r() const { return gamma / beta; }
};

// Domain errors carry a stable tag so the CLI can map them to exit codes.
class EvansError : public std::runtime_error {
public:
    EvansError(std::string tag, const std::string& what)
        : std::runtime_error(tag + ": " + what), tag_(std::move(tag)) {}
    const std::string& tag() const { return tag_; }

private:
    std::string tag_;
};

void validate(const ModelParams& model);
void validate(const ModeParams& mode);

} // namespace evans
