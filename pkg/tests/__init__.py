# Test package for tree-hardy
