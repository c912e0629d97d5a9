import math

from mahlerbound.poly import parse_polynomial

LEHMER_POLYNOMIAL = parse_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")
LEHMER_MEASURE = 1.1762808182599175

SMYTH_POLYNOMIAL = parse_polynomial("x^3-x-1")
SMYTH_MEASURE = 1.3247179572447460

GOLDEN_RATIO = (1 + math.sqrt(5)) / 2
