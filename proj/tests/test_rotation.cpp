#include <catch2/catch.hpp>

#include "seampose/rotation.hpp"

using namespace seampose;

TEST_CASE("rot6d of identity and axis rotations") {
  const Mat3<double> eye = Mat3<double>::Identity();
  Rot6<double> v = rot6d_from_matrix(eye);
  Rot6<double> expect;
  expect << 1, 0, 0, 0, 1, 0;
  REQUIRE((v - expect).cwiseAbs().maxCoeff() == 0.0);

  // 90 degrees about z: columns (0,1,0) and (-1,0,0)
  Mat3<double> rz;
  rz << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  v = rot6d_from_matrix(rz);
  Rot6<double> expect_z;
  expect_z << 0, 1, 0, -1, 0, 0;
  REQUIRE((v - expect_z).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("matrix_from_rot6d basic reconstructions") {
  Rot6<double> v;
  v << 1, 0, 0, 0, 1, 0;
  REQUIRE((matrix_from_rot6d(v) - Mat3<double>::Identity()).cwiseAbs().maxCoeff() == 0.0);

  // Scale invariance of Gram-Schmidt.
  v << 2, 0, 0, 0, 3, 0;
  REQUIRE((matrix_from_rot6d(v) - Mat3<double>::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  // Hand Gram-Schmidt: a1=(1,0,0), a2=(1,1,0) -> columns e1, e2, e3.
  v << 1, 0, 0, 1, 1, 0;
  const Mat3<double> r = matrix_from_rot6d(v);
  REQUIRE((r - Mat3<double>::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  REQUIRE(is_rotation(r, 1e-12));
}

TEST_CASE("round trip matrix -> 6d -> matrix over 1000 seeded rotations") {
  Rng rng(20240901);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const Mat3<double> r = random_rotation(rng);
    const Mat3<double> back = matrix_from_rot6d(rot6d_from_matrix(r));
    worst = std::max(worst, (back - r).cwiseAbs().maxCoeff());
  }
  REQUIRE(worst < 1e-12);
}

TEST_CASE("reconstruction is orthonormal det +1 for random non-degenerate inputs") {
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    Rot6<double> v;
    for (int k = 0; k < 6; ++k) v(k) = rng.uniform(-2.0, 2.0);
    Vec3<double> a1 = v.head<3>(), a2 = v.tail<3>();
    if (a1.norm() < 1e-3 || a1.cross(a2).norm() < 1e-3 * a1.norm() * a2.norm()) {
      --i;
      continue;
    }
    const Mat3<double> r = matrix_from_rot6d(v);
    REQUIRE(is_rotation(r, 1e-9));
  }
}

TEST_CASE("degenerate 6d inputs are rejected") {
  Rot6<double> v = Rot6<double>::Zero();
  REQUIRE_THROWS_AS(matrix_from_rot6d(v), DegenerateRotation);
  v << 1, 0, 0, 2, 0, 0;  // parallel
  REQUIRE_THROWS_AS(matrix_from_rot6d(v), DegenerateRotation);
  v << 1, 0, 0, -3, 1e-9, 0;  // nearly anti-parallel
  REQUIRE_THROWS_AS(matrix_from_rot6d(v), DegenerateRotation);
}

TEST_CASE("gram-schmidt backward matches central finite differences") {
  Rng rng(5150);
  for (int trial = 0; trial < 20; ++trial) {
    Rot6<double> v;
    for (int k = 0; k < 6; ++k) v(k) = rng.uniform(-1.5, 1.5);
    if (v.head<3>().norm() < 0.3 ||
        v.head<3>().cross(v.tail<3>()).norm() < 0.1) {
      --trial;
      continue;
    }
    Mat3<double> gr;
    for (int k = 0; k < 9; ++k) gr.data()[k] = rng.uniform(-1.0, 1.0);
    const Rot6<double> grad = matrix_from_rot6d_backward(v, gr);

    const double h = 1e-6;
    for (int k = 0; k < 6; ++k) {
      Rot6<double> vp = v, vm = v;
      vp(k) += h;
      vm(k) -= h;
      const double fp = (matrix_from_rot6d(vp).array() * gr.array()).sum();
      const double fm = (matrix_from_rot6d(vm).array() * gr.array()).sum();
      const double fd = (fp - fm) / (2 * h);
      REQUIRE(grad(k) == Approx(fd).margin(1e-6).epsilon(1e-6));
    }
  }
}

TEST_CASE("mirror_x conjugation preserves rotation-ness and traces") {
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const Mat3<double> r = random_rotation(rng);
    const Mat3<double> m = mirror_x(r);
    REQUIRE(is_rotation(m, 1e-12));
    REQUIRE(m.trace() == r.trace());
  }
}
