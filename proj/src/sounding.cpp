#include "relaycs/sounding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace relaycs {

namespace {

// Plain dense Kronecker product; the operands here are small training
// matrices, so no structure exploitation is needed.
CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void check_codebook(const SoundingCodebook& codebook) {
  if (codebook.beams.cols() < 1 || codebook.combiners.cols() < 1) {
    throw std::invalid_argument("sounding: codebook must be non-empty");
  }
  if (codebook.beams.cols() % codebook.combiners.cols() != 0) {
    throw std::invalid_argument(
        "sounding: combiner count must divide the beam count, got " +
        std::to_string(codebook.beams.cols()) + " beams for " +
        std::to_string(codebook.combiners.cols()) + " combiners");
  }
}

void check_dictionaries(const SoundingCodebook& codebook,
                        const SteeringDictionary& bs_dict,
                        const SteeringDictionary& ms_dict) {
  if (bs_dict.num_elements != codebook.beams.rows()) {
    throw std::invalid_argument(
        "sounding: BS dictionary element count does not match the beams");
  }
  if (ms_dict.num_elements != codebook.combiners.rows()) {
    throw std::invalid_argument(
        "sounding: MS dictionary element count does not match the combiners");
  }
}

void check_mask(const BlockageMask* mask, Eigen::Index n, const char* side) {
  if (mask != nullptr && mask->size() != n) {
    throw std::invalid_argument(std::string("sounding: ") + side +
                                " mask size does not match the array");
  }
}

}  // namespace

CMatrix sample_beam_matrix(Rng& rng, int num_elements, int count) {
  if (num_elements < 1 || count < 1) {
    throw std::invalid_argument("sample_beam_matrix: dimensions must be >= 1");
  }
  static const Complex alphabet[4] = {Complex(1.0, 0.0), Complex(-1.0, 0.0),
                                      Complex(0.0, 1.0), Complex(0.0, -1.0)};
  const double scale = 1.0 / std::sqrt(static_cast<double>(num_elements));
  CMatrix out(num_elements, count);
  for (int c = 0; c < count; ++c) {
    for (int r = 0; r < num_elements; ++r) {
      out(r, c) = scale * alphabet[rng.below(4)];
    }
  }
  return out;
}

SoundingCodebook sample_codebook(Rng& rng, int n_bs, int n_ms, int m_bs,
                                 int m_ms) {
  if (m_ms < 1 || m_bs < 1 || m_bs % m_ms != 0) {
    throw std::invalid_argument(
        "sample_codebook: combiner count must divide the beam count, got " +
        std::to_string(m_bs) + " beams for " + std::to_string(m_ms) +
        " combiners");
  }
  SoundingCodebook codebook;
  codebook.beams = sample_beam_matrix(rng, n_bs, m_bs);
  codebook.combiners = sample_beam_matrix(rng, n_ms, m_ms);
  return codebook;
}

CMatrix assemble_psi(const SoundingCodebook& codebook) {
  check_codebook(codebook);
  const int m_bs = codebook.num_beams();
  const int m_ms = codebook.num_combiners();
  const int per = codebook.snapshots_per_combiner();
  const Eigen::Index n_bs = codebook.beams.rows();
  const Eigen::Index n_ms = codebook.combiners.rows();
  CMatrix psi(m_bs, n_ms * n_bs);
  for (int m = 0; m < m_ms; ++m) {
    const CMatrix block = kron(codebook.combiners.col(m).adjoint(),
                               codebook.beams.middleCols(m * per, per)
                                   .transpose());
    psi.middleRows(m * per, per) = block;
  }
  return psi;
}

CMatrix assemble_psi_baseline(const SoundingCodebook& codebook) {
  check_codebook(codebook);
  const int per = codebook.snapshots_per_combiner();
  return kron(codebook.beams.leftCols(per).transpose(),
              codebook.combiners.adjoint());
}

CMatrix dictionary_operator(const SteeringDictionary& bs_dict,
                            const SteeringDictionary& ms_dict) {
  return kron(ms_dict.matrix, bs_dict.matrix.conjugate());
}

CMatrix baseline_dictionary_operator(const SteeringDictionary& bs_dict,
                                     const SteeringDictionary& ms_dict) {
  return kron(bs_dict.matrix.conjugate(), ms_dict.matrix);
}

CMatrix sensing_matrix(const CMatrix& psi, const SteeringDictionary& bs_dict,
                       const SteeringDictionary& ms_dict,
                       const BlockageMask* bs_mask,
                       const BlockageMask* ms_mask) {
  const Eigen::Index n_bs = bs_dict.num_elements;
  const Eigen::Index n_ms = ms_dict.num_elements;
  if (psi.cols() != n_ms * n_bs) {
    throw std::invalid_argument(
        "sensing_matrix: operator width does not match the dictionaries");
  }
  check_mask(bs_mask, n_bs, "BS");
  check_mask(ms_mask, n_ms, "MS");
  CMatrix dict = dictionary_operator(bs_dict, ms_dict);
  if (bs_mask != nullptr || ms_mask != nullptr) {
    CVector d = CVector::Ones(n_ms * n_bs);
    for (Eigen::Index i_ms = 0; i_ms < n_ms; ++i_ms) {
      for (Eigen::Index i_bs = 0; i_bs < n_bs; ++i_bs) {
        Complex v(1.0, 0.0);
        if (ms_mask != nullptr) v *= ms_mask->coefficients(i_ms);
        if (bs_mask != nullptr) v *= std::conj(bs_mask->coefficients(i_bs));
        d(i_bs + n_bs * i_ms) = v;
      }
    }
    dict = d.asDiagonal() * dict;
  }
  return psi * dict;
}

CMatrix sensing_matrix_fast(const SoundingCodebook& codebook,
                            const SteeringDictionary& bs_dict,
                            const SteeringDictionary& ms_dict,
                            const BlockageMask* bs_mask,
                            const BlockageMask* ms_mask) {
  check_codebook(codebook);
  check_dictionaries(codebook, bs_dict, ms_dict);
  check_mask(bs_mask, bs_dict.num_elements, "BS");
  check_mask(ms_mask, ms_dict.num_elements, "MS");

  // Phi factors over the two link ends: for row r = m*per + n and column
  // g_bs + G_BS*g_ms,
  //   Phi(r, .) = (q_m^H B_MS a_ms(g_ms)) * (p_r^T conj(B_BS) conj(a_bs(g_bs)))
  // so assemble the two small products and take their outer combinations.
  CMatrix ms_cols = ms_dict.matrix;
  if (ms_mask != nullptr) {
    ms_cols = ms_mask->coefficients.asDiagonal() * ms_cols;
  }
  const CMatrix c_ms = codebook.combiners.adjoint() * ms_cols;

  CMatrix bs_cols = bs_dict.matrix.conjugate();
  if (bs_mask != nullptr) {
    bs_cols = bs_mask->coefficients.conjugate().asDiagonal() * bs_cols;
  }
  const CMatrix c_bs = codebook.beams.transpose() * bs_cols;

  const int m_bs = codebook.num_beams();
  const int per = codebook.snapshots_per_combiner();
  const int g_bs = bs_dict.grid_size();
  const int g_ms = ms_dict.grid_size();

  CMatrix ms_rows(m_bs, g_ms);
  for (int r = 0; r < m_bs; ++r) {
    ms_rows.row(r) = c_ms.row(r / per);
  }

  CMatrix phi(m_bs, static_cast<Eigen::Index>(g_bs) * g_ms);
  for (int a = 0; a < g_ms; ++a) {
    for (int d = 0; d < g_bs; ++d) {
      phi.col(d + static_cast<Eigen::Index>(g_bs) * a) =
          ms_rows.col(a).cwiseProduct(c_bs.col(d));
    }
  }
  return phi;
}

CMatrix baseline_sensing_matrix(const SoundingCodebook& codebook,
                                const SteeringDictionary& bs_dict,
                                const SteeringDictionary& ms_dict) {
  check_codebook(codebook);
  check_dictionaries(codebook, bs_dict, ms_dict);
  const int m_ms = codebook.num_combiners();
  const int per = codebook.snapshots_per_combiner();
  const int g_bs = bs_dict.grid_size();
  const int g_ms = ms_dict.grid_size();

  const CMatrix c_ms = codebook.combiners.adjoint() * ms_dict.matrix;
  const CMatrix c_bs = codebook.beams.leftCols(per).transpose() *
                       bs_dict.matrix.conjugate();

  CMatrix phi(codebook.num_beams(), static_cast<Eigen::Index>(g_bs) * g_ms);
  for (int d = 0; d < g_bs; ++d) {
    for (int a = 0; a < g_ms; ++a) {
      const Eigen::Index col = a + static_cast<Eigen::Index>(g_ms) * d;
      for (int n = 0; n < per; ++n) {
        phi.col(col).segment(static_cast<Eigen::Index>(n) * m_ms, m_ms) =
            c_bs(n, d) * c_ms.col(a);
      }
    }
  }
  return phi;
}

double noise_variance_for_snr_db(double snr_db) {
  return std::pow(10.0, -snr_db / 10.0);
}

MeasurementBatch simulate_measurements(Rng& rng,
                                       const SoundingCodebook& codebook,
                                       const CMatrix& h_effective,
                                       double snr_db) {
  check_codebook(codebook);
  if (h_effective.rows() != codebook.combiners.rows() ||
      h_effective.cols() != codebook.beams.rows()) {
    throw std::invalid_argument(
        "simulate_measurements: channel dimensions do not match the codebook");
  }
  const int m_bs = codebook.num_beams();
  const int per = codebook.snapshots_per_combiner();

  MeasurementBatch batch;
  batch.snr_db = snr_db;
  batch.noise_variance = noise_variance_for_snr_db(snr_db);
  const double sigma = std::sqrt(batch.noise_variance);

  const CMatrix projected = h_effective * codebook.beams;  // n_ms x m_bs
  batch.y.resize(m_bs);
  for (int r = 0; r < m_bs; ++r) {
    const int m = r / per;
    const Complex signal =
        codebook.combiners.col(m).dot(projected.col(r));  // q_m^H H p_r
    const double gain = codebook.combiners.col(m).norm();
    batch.y(r) = signal + sigma * gain * rng.cnormal();
  }
  return batch;
}

MeasurementBatch simulate_baseline_measurements(Rng& rng,
                                                const SoundingCodebook& codebook,
                                                const CMatrix& h_effective,
                                                double snr_db) {
  check_codebook(codebook);
  if (h_effective.rows() != codebook.combiners.rows() ||
      h_effective.cols() != codebook.beams.rows()) {
    throw std::invalid_argument(
        "simulate_baseline_measurements: channel dimensions do not match the "
        "codebook");
  }
  const int m_ms = codebook.num_combiners();
  const int per = codebook.snapshots_per_combiner();

  MeasurementBatch batch;
  batch.snr_db = snr_db;
  batch.noise_variance = noise_variance_for_snr_db(snr_db);
  const double sigma = std::sqrt(batch.noise_variance);

  // Combined snapshots q_m^H H p_n for the first beam group, every combiner.
  const CMatrix projected =
      codebook.combiners.adjoint() * h_effective *
      codebook.beams.leftCols(per);  // m_ms x per
  batch.y.resize(static_cast<Eigen::Index>(m_ms) * per);
  for (Eigen::Index idx = 0; idx < batch.y.size(); ++idx) {
    const Eigen::Index m = idx % m_ms;
    const Eigen::Index n = idx / m_ms;
    const double gain = codebook.combiners.col(m).norm();
    batch.y(idx) = projected(m, n) + sigma * gain * rng.cnormal();
  }
  return batch;
}

}  // namespace relaycs
