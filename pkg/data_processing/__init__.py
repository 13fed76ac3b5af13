# Data processing package
