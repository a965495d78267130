#include "mnulink/fft.hpp"

#include <fftw3.h>

#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace mnulink::fft {

namespace {

// Plans are cached per (size, sign). Creation is serialized; execution via
// fftw_execute_dft on caller-owned buffers is thread-safe.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        const std::uint64_t key = (static_cast<std::uint64_t>(n) << 1) | (sign == FFTW_FORWARD);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        cvec scratch_in(n), scratch_out(n);
        fftw_plan plan = fftw_plan_dft_1d(
            static_cast<int>(n),
            reinterpret_cast<fftw_complex*>(scratch_in.data()),
            reinterpret_cast<fftw_complex*>(scratch_out.data()),
            sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    std::mutex mutex_;
    std::unordered_map<std::uint64_t, fftw_plan> plans_;
};

cvec run(const cvec& in, int sign) {
    if (in.empty()) return {};
    cvec out(in.size());
    fftw_plan plan = PlanCache::instance().get(in.size(), sign);
    // fftw_execute_dft does not modify the input array for out-of-place plans.
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<cd*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

cvec forward(const cvec& in) { return run(in, FFTW_FORWARD); }

cvec backward(const cvec& in) { return run(in, FFTW_BACKWARD); }

cvec inverse(const cvec& in) {
    cvec out = backward(in);
    const double scale = 1.0 / static_cast<double>(in.size());
    for (cd& v : out) v *= scale;
    return out;
}

}  // namespace mnulink::fft
