#ifndef GPDEXT_CONTEXT_HPP_
#define GPDEXT_CONTEXT_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace gpdext {

  using BigInt = boost::multiprecision::cpp_int;

  //! Enumeration bounds. Every exhaustive search checks its cardinality
  //! against one of these before starting.
  struct Bounds {
    //! Largest groupoid accepted by exhaustive axiom checks.
    std::size_t max_elements = 64;
    //! Largest raw (unpruned) space of cochain tables a backtracking search
    //! may walk.
    BigInt max_cochains = BigInt(1) << 40;
    //! Largest |C^1(G, N)| (or |C^1(G, R^x)|) enumerated for orbit closure.
    BigInt max_one_cochains = BigInt(1) << 20;
    //! Largest |C^1(G, Iso(N))| enumerated when all kernels are requested.
    BigInt max_iso_families = BigInt(1) << 16;
  };

  inline void check_bound(std::string const& what,
                          BigInt const&      cardinality,
                          BigInt const&      bound) {
    if (cardinality > bound) {
      throw SearchSpaceTooLarge(what, cardinality.str(), bound.str());
    }
  }

  //! Passed into every operation that may run in parallel. Results never
  //! depend on the worker count: work items are indexed and merged in index
  //! order.
  struct ExecutionContext {
    unsigned workers = 1;
    Bounds   bounds   = {};

    template <typename Func>
    void parallel_for(std::size_t n, Func&& func) const {
      unsigned const nr_threads
          = static_cast<unsigned>(std::min<std::size_t>(std::max(workers, 1u), n));
      if (nr_threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
          func(i);
        }
        return;
      }
      std::atomic<std::size_t> next{0};
      std::mutex               mtx;
      std::size_t              failed_at = n;
      std::exception_ptr       failure;
      auto                     worker = [&]() {
        while (true) {
          std::size_t const i = next.fetch_add(1);
          if (i >= n) {
            return;
          }
          try {
            func(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(mtx);
            if (i < failed_at) {
              failed_at = i;
              failure   = std::current_exception();
            }
          }
        }
      };
      std::vector<std::thread> pool;
      pool.reserve(nr_threads);
      for (unsigned t = 0; t < nr_threads; ++t) {
        pool.emplace_back(worker);
      }
      for (auto& t : pool) {
        t.join();
      }
      if (failure) {
        std::rethrow_exception(failure);
      }
    }

    template <typename T, typename Func>
    std::vector<T> parallel_map(std::size_t n, Func&& func) const {
      std::vector<T> out(n);
      parallel_for(n, [&](std::size_t i) { out[i] = func(i); });
      return out;
    }
  };

}  // namespace gpdext

#endif  // GPDEXT_CONTEXT_HPP_
