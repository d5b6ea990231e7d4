#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>

#include <omp.h>

#include "CLI11.hpp"
#include "relaycs/experiments.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Compare the OpenMP trial engine against the serial reference on a "
      "single fault-diagnosis sweep point"};
  int trials = 200;
  int m_bs = 48;
  int fault_count = 8;
  int threads = 0;
  app.add_option("--trials", trials, "Trials at the benchmark point");
  app.add_option("--m-bs", m_bs, "Measurements (beams) at the point");
  app.add_option("--fault-count", fault_count, "Blocked elements");
  app.add_option("--threads", threads, "OpenMP workers (0 = all cores)");
  CLI11_PARSE(app, argc, argv);

  try {
    relaycs::ExperimentConfig config = relaycs::fig1_defaults();
    config.m_bs_sweep = {m_bs};
    config.fault_counts = {fault_count};
    config.blockage_kinds = {relaycs::BlockageKind::complete};
    config.trials = trials;
    config.threads = threads;
    config.validate();

    auto start = std::chrono::steady_clock::now();
    const relaycs::ExperimentResult serial = relaycs::run_serial(config);
    const double serial_s = seconds_since(start);

    start = std::chrono::steady_clock::now();
    const relaycs::ExperimentResult parallel = relaycs::run(config);
    const double parallel_s = seconds_since(start);

    const bool identical = serial.records == parallel.records;
    const int workers = threads > 0 ? threads : omp_get_max_threads();

    std::printf("point: m_bs=%d, faults=%d, trials=%d\n", m_bs, fault_count,
                trials);
    std::printf("serial:   %8.3f s  (%.2f ms/trial)\n", serial_s,
                1e3 * serial_s / trials);
    std::printf("parallel: %8.3f s  (%.2f ms/trial, %d worker%s, x%.2f)\n",
                parallel_s, 1e3 * parallel_s / trials, workers,
                workers == 1 ? "" : "s",
                parallel_s > 0.0 ? serial_s / parallel_s : 0.0);
    std::printf("records:  %s (%zu)\n",
                identical ? "identical" : "MISMATCH", serial.records.size());
    return identical ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
