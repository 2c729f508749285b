#pragma once

#include "plp/certify.hpp"
#include "plp/errors.hpp"
#include "plp/interval.hpp"
#include "plp/json_io.hpp"
#include "plp/oracle.hpp"
#include "plp/prime_zeta.hpp"
#include "plp/sequence.hpp"
#include "plp/sieve.hpp"
