# Graph package
