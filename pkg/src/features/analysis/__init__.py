# Analysis feature
