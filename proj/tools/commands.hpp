// Table-producing commands behind the spidernet command line.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "spidernet/graph.hpp"
#include "spidernet/pq_walk.hpp"

namespace spidernet::cli {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  /// Index of a column by name; throws InvalidParams when absent.
  std::size_t column(const std::string& name) const;
};

enum class Format { kCsv, kJson };

/// 15 significant digits.
std::string format_number(double x);

void write_csv(const Table& t, std::ostream& out);
/// An array of records keyed by column name.
void write_json(const Table& t, std::ostream& out);
void write_table(const Table& t, Format f, std::ostream& out);

/// Rows (n, p_origin, p_stratum_1..p_stratum_L) for n = 0..steps, from the
/// full graph or from the ladder reduction.
Table simulate_full(const SpidernetParams& sp, int steps, std::size_t levels);
Table simulate_reduced(const PqParams& pq, int steps, std::size_t levels);

/// One row for the eigenvalue 1, one per conjugate pair e^{+-i theta_j}, one for
/// -1 when present; trace columns repeated on every row.
Table spectrum(const PqParams& pq, std::size_t N);

/// <Psi_l, U^n Psi_m> for n = 0..n_max by quadrature and by the ladder walk.
Table amplitude_table(const PqParams& pq, int l, int m, int n_max);

Table localize(const SpidernetParams& sp);
/// Every (b, c) with 2 <= b <= b_max, 1 <= c <= min(c_max, b-1), root degree a.
Table localize_sweep(int b_max, int c_max, int a);

/// Return probability at the root over n = 620..650 with the atom envelope
/// w^2 cos^2(n theta~) and the time-averaged level w^2/2.
Table figure2(const SpidernetParams& sp = {4, 6, 3});

/// Classical return probabilities by the integral and by the birth-death chain.
Table rwalk(const PqParams& pq, int n_max);

/// A quick run of the invariant suite; column `passed` per check.
Table verify();

/// Edge list as a table of "j:i" labels.
Table edge_table(const Spidernet& g);

/// Full command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spidernet::cli
