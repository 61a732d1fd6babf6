"""hermblock: isometric decompositions and spectral certificates for PSD block matrices."""
