#pragma once

#include "tamelink/arith.hpp"
#include "tamelink/certify.hpp"
#include "tamelink/cohom.hpp"
#include "tamelink/error.hpp"
#include "tamelink/fields.hpp"
#include "tamelink/fp.hpp"
#include "tamelink/json_io.hpp"
#include "tamelink/lie.hpp"
#include "tamelink/linking.hpp"
#include "tamelink/mild.hpp"
#include "tamelink/search.hpp"
