#include "disac/transforms.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace disac::fft {
namespace {

// Plan creation is not thread-safe in FFTW; execution via fftw_execute_dft
// is. Plans are cached per geometry and created under a lock, with
// FFTW_UNALIGNED so they apply to any caller buffer.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    // n: transform length, howmany: batch count, stride/dist: element layout.
    fftw_plan get(int n, int howmany, int stride, int dist, int sign) {
        const Key key{n, howmany, stride, dist, sign};
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::vector<fftw_complex> scratch(static_cast<size_t>(n) * howmany * 2);
        fftw_plan plan = fftw_plan_many_dft(
            1, &n, howmany, scratch.data(), nullptr, stride, dist,
            scratch.data(), nullptr, stride, dist, sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    using Key = std::tuple<int, int, int, int, int>;
    PlanCache() = default;
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

void execute(std::complex<double>* data, int n, int howmany, int stride,
             int dist, int sign) {
    fftw_plan plan = PlanCache::instance().get(n, howmany, stride, dist, sign);
    auto* raw = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, raw, raw);
}

}  // namespace

void forward_inplace(std::complex<double>* data, int n) {
    execute(data, n, 1, 1, n, FFTW_FORWARD);
}

void backward_inplace(std::complex<double>* data, int n) {
    execute(data, n, 1, 1, n, FFTW_BACKWARD);
}

Eigen::VectorXcd forward(const Eigen::VectorXcd& x) {
    Eigen::VectorXcd y = x;
    forward_inplace(y.data(), static_cast<int>(y.size()));
    return y;
}

Eigen::VectorXcd backward(const Eigen::VectorXcd& x) {
    Eigen::VectorXcd y = x;
    backward_inplace(y.data(), static_cast<int>(y.size()));
    return y;
}

void forward_columns(Eigen::MatrixXcd& m) {
    execute(m.data(), static_cast<int>(m.rows()), static_cast<int>(m.cols()),
            1, static_cast<int>(m.rows()), FFTW_FORWARD);
}

void backward_columns(Eigen::MatrixXcd& m) {
    execute(m.data(), static_cast<int>(m.rows()), static_cast<int>(m.cols()),
            1, static_cast<int>(m.rows()), FFTW_BACKWARD);
}

void forward_rows(Eigen::MatrixXcd& m) {
    execute(m.data(), static_cast<int>(m.cols()), static_cast<int>(m.rows()),
            static_cast<int>(m.rows()), 1, FFTW_FORWARD);
}

void backward_rows(Eigen::MatrixXcd& m) {
    execute(m.data(), static_cast<int>(m.cols()), static_cast<int>(m.rows()),
            static_cast<int>(m.rows()), 1, FFTW_BACKWARD);
}

}  // namespace disac::fft
