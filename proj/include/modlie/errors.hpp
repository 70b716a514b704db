#ifndef MODLIE_ERRORS_HPP
#define MODLIE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace modlie {

// Base class for all domain errors thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define MODLIE_DEFINE_ERROR(Name)        \
    struct Name : Error {                \
        using Error::Error;              \
    }

// scalars
MODLIE_DEFINE_ERROR(MixedParity);
MODLIE_DEFINE_ERROR(OddParity);
MODLIE_DEFINE_ERROR(MissingAssignment);
MODLIE_DEFINE_ERROR(ZeroForInvertible);
MODLIE_DEFINE_ERROR(BadAssignment);
MODLIE_DEFINE_ERROR(NotAUnit);
MODLIE_DEFINE_ERROR(RingMismatch);

// superalg
MODLIE_DEFINE_ERROR(DimensionMismatch);
MODLIE_DEFINE_ERROR(InhomogeneousElement);
MODLIE_DEFINE_ERROR(SymbolicNotSupported);
MODLIE_DEFINE_ERROR(NotDiagonal);
MODLIE_DEFINE_ERROR(EvenElement);
MODLIE_DEFINE_ERROR(CharacteristicTwo);

// pstruct
MODLIE_DEFINE_ERROR(NoSolution);
MODLIE_DEFINE_ERROR(SymbolicUnderdetermined);
MODLIE_DEFINE_ERROR(NotWeightBasis);

// divpow
MODLIE_DEFINE_ERROR(DescriptorMismatch);
MODLIE_DEFINE_ERROR(WrongDescriptor);

// families
MODLIE_DEFINE_ERROR(EpsilonZero);
MODLIE_DEFINE_ERROR(ExpansionFailure);
MODLIE_DEFINE_ERROR(NotACocycle);
MODLIE_DEFINE_ERROR(JacobiFailure);
MODLIE_DEFINE_ERROR(NamingConvention);
MODLIE_DEFINE_ERROR(FixtureInvalid);

// io
MODLIE_DEFINE_ERROR(ParseError);

#undef MODLIE_DEFINE_ERROR

}  // namespace modlie

#endif
