"""Prime enumeration over odd indices: trial division, Atkin and wheel sieves."""
from oddsieve.atkin import index_sieve_of_atkin, sieve_of_atkin, sieve_of_atkin_tabled
from oddsieve.index_core import index_of, number_of
from oddsieve.oracle import eratosthenes, primes_below
from oddsieve.result import PrimeList
from oddsieve.trial_division import index_prime_enumeration, prime_enumeration
from oddsieve.wheel import index_wheel_sieve, wheel_sieve_reference

__all__ = [
    "PrimeList",
    "eratosthenes",
    "index_of",
    "index_prime_enumeration",
    "index_sieve_of_atkin",
    "number_of",
    "prime_enumeration",
    "primes_below",
    "sieve_of_atkin",
    "sieve_of_atkin_tabled",
    "wheel_sieve_reference",
    "index_wheel_sieve",
]
