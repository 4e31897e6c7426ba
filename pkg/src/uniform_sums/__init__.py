"""Laws of sums of standard uniform random variables under arbitrary dependence."""
