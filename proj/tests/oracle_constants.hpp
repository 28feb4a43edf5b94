#pragma once

// Reference values frozen before the build from an arbitrary-precision
// oracle (mpmath at 50 decimal digits): Phi(x) = erfc(-x/sqrt(2))/2 and
// phi(x) = exp(-x^2/2)/sqrt(2*pi), evaluated at the exact double arguments
// listed below. The test suite is hermetic against these constants.

namespace oracle {

struct PhiRef {
  double x;
  double phi;
};

// Phi at +-{0.5, 1, sqrt2, sqrt3, 1.87083, 2, 2.23607, 3}
inline constexpr PhiRef kPhiTable[16] = {
    {0.5, 0.6914624612740131},
    {-0.5, 0.3085375387259869},
    {1.0, 0.8413447460685429},
    {-1.0, 0.15865525393145705},
    {1.4142135623730951, 0.9213503964748574},
    {-1.4142135623730951, 0.07864960352514255},
    {1.7320508075688772, 0.9583677416682248},
    {-1.7320508075688772, 0.04163225833177521},
    {1.87083, 0.9693156760121468},
    {-1.87083, 0.030684323987853171},
    {2.0, 0.9772498680518208},
    {-2.0, 0.022750131948179207},
    {2.23607, 0.9873264068922875},
    {-2.23607, 0.012673593107712468},
    {3.0, 0.9986501019683699},
    {-3.0, 0.0013498980316300945},
};

inline constexpr double kPhiBarSqrt2 = 0.07864960352514255;   // Phibar(double sqrt 2)
inline constexpr double kCStar = 3.178655565886997;           // 1/(4 Phibar(sqrt 2))
inline constexpr double kInvSqrt2Pi = 0.3989422804014327;     // phi(0)
inline constexpr double kGQuarter = 0.4276851664582566;       // G(1/4)
inline constexpr double kGTwoSevenths = 0.4024648148420356;   // G(2/7)
inline constexpr double kGSevenTwentyFifths = 0.4065765771206849;  // G(7/25)
inline constexpr double kH2 = 0.433145689661731;              // h(2)
inline constexpr double kHalfMix2 = 0.4532882885603425;       // half-mix at k=2
inline constexpr double kLSqrt3 = 0.4625409894113078;         // L(sqrt 3)
inline constexpr double kEndpointMix = 0.9785089218182973;    // Phi(sqrt3)/2 + Phi(3)/2
inline constexpr double kCStarPhiBar2 = 0.07231483354174343;  // c* Phibar(2) = 1/2 - G(1/4)

// equal weights 1/sqrt(20): count of sign vectors with |S| <= 1 (binomial sum)
inline constexpr unsigned long long kEqual20Numerator = 772616ULL;
inline constexpr unsigned long long kEqual20Denominator = 1048576ULL;

}  // namespace oracle
